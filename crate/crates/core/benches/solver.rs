use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use recover_core::scenarios::{
    build_image_scenario, build_thresholded_products_scenario, ImageParams, Scenario,
    ThresholdedParams,
};
use recover_core::solve;

fn fixed_budget(s: &Scenario, iters: usize, threads: usize) -> f64 {
    let mut cfg = s.config.clone();
    cfg.residual_tol = 0.0;
    cfg.max_iters = iters;
    cfg.threads = threads;
    let (x, _) = solve(&s.problem, &cfg).unwrap();
    x.norm()
}

fn bench_modes(c: &mut Criterion, label: &str, s: &Scenario, iters: usize) {
    // at least two workers so the pool path is measured even on one core
    let workers = std::thread::available_parallelism().map_or(2, |n| n.get().max(2));
    let mut group = c.benchmark_group(label);
    group.sample_size(10);
    group.bench_function(BenchmarkId::new("sequential", iters), |b| {
        b.iter(|| fixed_budget(s, iters, 1))
    });
    group.bench_function(
        BenchmarkId::new(format!("parallel_{workers}"), iters),
        |b| b.iter(|| fixed_budget(s, iters, workers)),
    );
    group.finish();
}

fn thresholded(c: &mut Criterion) {
    let full = build_thresholded_products_scenario(&ThresholdedParams::full()).unwrap();
    bench_modes(c, "thresholded_products_full", &full, 24);
    let desk = build_thresholded_products_scenario(&ThresholdedParams::desk()).unwrap();
    bench_modes(c, "thresholded_products_desk", &desk, 120);
}

fn image(c: &mut Criterion) {
    let desk = build_image_scenario(&ImageParams::desk()).unwrap();
    bench_modes(c, "image_desk", &desk, 50);
}

criterion_group!(benches, thresholded, image);
criterion_main!(benches);
