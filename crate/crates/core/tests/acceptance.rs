//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
//! fails. Runs the desk-scale scenarios in sequential mode.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use recover_core::certify::{run_certification, CertifyOptions, Check};
use recover_core::operators::{box_projector, hyperplane_projector};
use recover_core::scenarios::{
    build_distortion_scenario, build_image_scenario, build_thresholded_products_scenario,
    build_youla_scenario, measurement_vectors, youla_instance, DistortionParams, ImageParams,
    Scenario, ThresholdedParams, YoulaParams,
};
use recover_core::solver::{
    solve_relaxed, validate_control, RelaxationPolicy, RelaxedConfig, SolverConfig,
};
use recover_core::thresholds::Level;
use recover_core::{solve, Problem, Tensor, Trace};

const FEJER_SLACK: f64 = 1e-10;
const LAMBDA_FLOOR: f64 = 1.0 - 1e-12;

#[derive(Default)]
struct Gate {
    results: Vec<(usize, bool, String)>,
}

impl Gate {
    fn report(&mut self, id: usize, passed: bool, detail: String) {
        self.results.push((id, passed, detail));
    }

    /// Prints the results in criterion order and returns the failure count.
    fn finish(mut self) -> usize {
        self.results.sort_by_key(|r| r.0);
        for (id, passed, detail) in &self.results {
            println!(
                "criterion {id:>2}: {}  {detail}",
                if *passed { "PASS" } else { "FAIL" }
            );
        }
        self.results.iter().filter(|r| !r.1).count()
    }
}

struct Run {
    label: String,
    trace: Trace,
    csv: String,
}

fn run(label: &str, s: &Scenario, config: &SolverConfig) -> (Tensor, Run, Duration) {
    let t = Instant::now();
    let (x, trace) = solve(&s.problem, config).expect("solver run");
    let elapsed = t.elapsed();
    let csv = trace.to_csv();
    (
        x,
        Run {
            label: label.to_string(),
            trace,
            csv,
        },
        elapsed,
    )
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn criterion_1(gate: &mut Gate) {
    let t = Instant::now();
    let rows = run_certification(&CertifyOptions {
        seed: 0,
        trials: 1000,
        inject_expansive: false,
    })
    .expect("certification");
    let elapsed = t.elapsed();
    let ops: Vec<_> = rows.iter().filter(|r| r.check != Check::Identity).collect();
    let worst = ops.iter().map(|r| r.max_violation).fold(0.0, f64::max);
    let failed: Vec<&str> = ops
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.name.as_str())
        .collect();
    let enough = ops.iter().all(|r| r.trials >= 1000);
    let passed = failed.is_empty() && enough && worst <= 1e-9 && elapsed.as_secs() <= 60;
    gate.report(
        1,
        passed,
        format!(
            "{} operators x 1000 pairs, worst violation {worst:.2e}, {:.1} s, failed {failed:?}",
            ops.len(),
            secs(elapsed)
        ),
    );
}

fn criterion_2(gate: &mut Gate) {
    let points = 10_000;
    let grid = |h: f64| (0..points).map(move |i| -h + 2.0 * h * i as f64 / (points - 1) as f64);

    let gamma = 0.05;
    let level = Level::new(gamma).unwrap();
    // soft through the quantizer: lift q back to |xi| and shrink
    let soft_q = grid(3.0 * gamma)
        .map(|xi| {
            let q = q_oracle(gamma, xi);
            let via = sgn(q) * ((q * q + gamma * gamma).sqrt() - gamma);
            (soft_oracle(gamma, xi) - via)
                .abs()
                .max((level.soft_via_q(xi) - soft_oracle(gamma, xi)).abs())
                .max((level.lift_q(level.q(xi)) - soft_oracle(gamma, xi)).abs())
        })
        .fold(0.0, f64::max);

    let rho = 325.0;
    let level = Level::new(rho).unwrap();
    let hard_corr = grid(3.0 * rho)
        .map(|xi| {
            let h = hard_oracle(rho, xi);
            let corrected = h + level.hard_to_soft_correction(level.hard(xi));
            (soft_oracle(rho, xi) - corrected).abs()
        })
        .fold(0.0, f64::max);
    gate.report(
        2,
        soft_q <= 1e-12 && hard_corr <= 1e-12,
        format!("soft-via-q defect {soft_q:.2e}, hard+correction defect {hard_corr:.2e} on {points} points each"),
    );
}

fn criterion_3(gate: &mut Gate, runs: &mut Vec<Run>) {
    let mut worst = 0.0f64;
    let mut solver_time = Duration::ZERO;
    for seed in 0..20 {
        let p = YoulaParams {
            seed,
            ..YoulaParams::desk()
        };
        let s = build_youla_scenario(&p).unwrap();
        let (x, r, elapsed) = run(&format!("youla seed {seed}"), &s, &s.config);
        solver_time += elapsed;
        let (v1, v2, xbar) = youla_instance(&p).unwrap();
        let r2 = project(&v2, xbar.as_slice());
        let oracle = alternating_projections(&v1, &v2, &r2, 1_000_000);
        worst = worst.max(dist(x.as_slice(), &oracle));
        runs.push(r);
    }
    gate.report(
        3,
        worst <= 1e-8 && secs(solver_time) <= 10.0,
        format!(
            "20 instances, max distance to alternating projections {worst:.2e}, solver time {:.2} s",
            secs(solver_time)
        ),
    );
}

fn distortion(gate: &mut Gate, runs: &mut Vec<Run>) {
    let p = DistortionParams::desk();
    let s = build_distortion_scenario(&p).unwrap();
    let (x, r, elapsed) = run("distortion", &s, &s.config);
    let iters = r.trace.iterations();
    runs.push(r);

    let xs = x.as_slice();
    let energy = xs
        .windows(2)
        .map(|w| (w[1] - w[0]).powi(2))
        .sum::<f64>()
        .sqrt();
    let f1 = energy - p.gamma1;
    let r2 = &s.observations.iter().find(|(id, _)| *id == 2).unwrap().1;
    let r3 = &s.observations.iter().find(|(id, _)| *id == 3).unwrap().1;
    let clip_res = xs
        .iter()
        .zip(r2.as_slice())
        .map(|(v, r)| (clip_oracle(p.gamma2, *v) - r).abs())
        .fold(0.0, f64::max);
    let theta: Vec<f64> = bandlimit_oracle(xs, p.band_count)
        .iter()
        .map(|v| arctan_oracle(p.gamma3, *v))
        .collect();
    let s3x = bandlimit_oracle(&theta, p.band_count);
    let s3r = bandlimit_oracle(r3.as_slice(), p.band_count);
    let s3_res = dist(&s3x, &s3r) / p.gamma3;

    let passed = f1 <= 1e-6
        && clip_res <= 1e-6
        && s3_res <= 1e-6
        && iters <= 50_000
        && secs(elapsed) <= 60.0;
    gate.report(
        6,
        passed,
        format!(
            "N={} band={}: f1 {f1:.2e}, clip {clip_res:.2e}, S3 {s3_res:.2e} after {iters} iterations, {:.2} s",
            p.n,
            p.band_count,
            secs(elapsed)
        ),
    );
}

/// Returns the first iterations at which the extrapolated schedule and a
/// constant unit relaxation reach residual 1e-6.
fn thresholded(gate: &mut Gate, runs: &mut Vec<Run>) -> (Option<usize>, Option<usize>) {
    let p = ThresholdedParams::desk();
    let s = build_thresholded_products_scenario(&p).unwrap();
    let (x, r, elapsed) = run("thresholded_products", &s, &s.config);
    let iters = r.trace.iterations();
    let emopsp_hit = r.trace.first_below(1e-6);
    runs.push(r);

    let vectors = measurement_vectors(&p).unwrap();
    let q_res = vectors
        .iter()
        .zip(&s.observations)
        .map(|(e, (_, rk))| {
            (q_oracle(p.gamma, dot(x.as_slice(), e.as_slice())) - rk.as_slice()[0]).abs()
        })
        .fold(0.0, f64::max);
    let control_ok = validate_control(&s.config.control, &s.problem.id_set()).is_ok();
    let m = s.config.control.period();
    gate.report(
        7,
        q_res <= 1e-6 && control_ok && m == 12,
        format!(
            "max |Q<x,e_k> - r_k| {q_res:.2e} after {iters} iterations ({:.2} s), control valid {control_ok} with M={m}",
            secs(elapsed)
        ),
    );

    let mut constant = s.config.clone();
    constant.relaxation = RelaxationPolicy::Constant(1.0);
    let (_, rc, _) = run("thresholded_products constant", &s, &constant);
    let constant_hit = rc.trace.first_below(1e-6);
    runs.push(rc);
    (emopsp_hit, constant_hit)
}

fn image(gate: &mut Gate, runs: &mut Vec<Run>) {
    let p = ImageParams::desk();
    let s = build_image_scenario(&p).unwrap();
    let (x, r, elapsed) = run("image", &s, &s.config);
    let iters = r.trace.iterations();
    runs.push(r);
    let residuals = s.op_residuals(&x).unwrap();
    let worst = residuals.iter().map(|(_, _, v)| *v).fold(0.0, f64::max);
    let kept = s.metric("kept_fraction", &x).unwrap();
    let passed =
        worst <= 1e-5 && iters <= 50_000 && secs(elapsed) <= 300.0 && (0.05..=0.15).contains(&kept);
    let detail: Vec<String> = residuals
        .iter()
        .map(|(_, n, v)| format!("{n} {v:.1e}"))
        .collect();
    gate.report(
        8,
        passed,
        format!(
            "N={} kept {:.1}%: {} after {iters} iterations, {:.1} s",
            p.n,
            100.0 * kept,
            detail.join(", "),
            secs(elapsed)
        ),
    );
}

fn criterion_4(gate: &mut Gate, runs: &[Run]) {
    let mut worst = f64::NEG_INFINITY;
    let mut culprit = String::new();
    for r in runs {
        let errs: Vec<f64> = r
            .trace
            .records
            .iter()
            .filter_map(|rec| rec.err_ref)
            .collect();
        for w in errs.windows(2) {
            let growth = w[1] - w[0];
            if growth > worst {
                worst = growth;
                culprit = r.label.clone();
            }
        }
    }
    gate.report(
        4,
        worst <= FEJER_SLACK,
        format!(
            "{} runs, largest step increase of the distance to the truth {worst:.2e} ({culprit})",
            runs.len()
        ),
    );
}

fn criterion_5(gate: &mut Gate, runs: &[Run], hits: (Option<usize>, Option<usize>)) {
    let mut min_lambda = f64::INFINITY;
    let mut count = 0usize;
    for r in runs {
        for rec in &r.trace.records {
            if rec.nu > 0.0 {
                let l = rec.big_lambda.expect("Lambda recorded when nu > 0");
                min_lambda = min_lambda.min(l);
                count += 1;
            }
        }
    }
    let faster = match hits {
        (Some(a), Some(b)) => a < b,
        (Some(_), None) => true,
        _ => false,
    };
    gate.report(
        5,
        min_lambda >= LAMBDA_FLOOR && faster,
        format!(
            "min Lambda_n {min_lambda:.15} over {count} iterations with nu_n > 0; \
             residual 1e-6 at iteration {:?} (extrapolated) vs {:?} (constant 1)",
            hits.0, hits.1
        ),
    );
}

fn criterion_9(gate: &mut Gate) {
    let mut intervals = Problem::new((1, 1));
    intervals
        .add_constraint(1, box_projector(0.0, 1.0).unwrap())
        .unwrap();
    intervals
        .add_constraint(2, box_projector(2.0, 3.0).unwrap())
        .unwrap();
    let cfg = RelaxedConfig {
        residual_tol: 1e-14,
        ..RelaxedConfig::default()
    };
    let (x, _) = solve_relaxed(&intervals, &cfg).unwrap();
    let mid_err = (x.as_slice()[0] - 1.5).abs();

    // three planes through a single point
    let normals = [[1.0, 2.0, 0.5], [-0.3, 1.0, 1.0], [0.7, -0.2, 1.5]];
    let target = [0.4, -1.1, 2.0];
    let mut planes = Problem::new((3, 1));
    for (i, a) in normals.iter().enumerate() {
        let b = dot(a, &target);
        let a = Tensor::new((3, 1), a.to_vec()).unwrap();
        planes
            .add_constraint(i + 1, hyperplane_projector(a, b).unwrap())
            .unwrap();
    }
    let (xr, _) = solve_relaxed(
        &planes,
        &RelaxedConfig {
            residual_tol: 1e-13,
            max_iters: 1_000_000,
            ..RelaxedConfig::default()
        },
    )
    .unwrap();
    let (xe, _) = solve(
        &planes,
        &SolverConfig {
            residual_tol: 1e-13,
            ..SolverConfig::default()
        },
    )
    .unwrap();
    let agree = dist(xr.as_slice(), xe.as_slice());
    gate.report(
        9,
        mid_err <= 1e-8 && agree <= 1e-6,
        format!("disjoint intervals limit off midpoint by {mid_err:.2e}; relaxed vs extrapolated on three planes {agree:.2e}"),
    );
}

fn criterion_10(gate: &mut Gate, runs: &[Run]) {
    let mut checked = Vec::new();
    let mut mismatched = Vec::new();
    let scenarios: Vec<(&str, Scenario)> = vec![
        (
            "distortion",
            build_distortion_scenario(&DistortionParams::desk()).unwrap(),
        ),
        (
            "thresholded_products",
            build_thresholded_products_scenario(&ThresholdedParams::desk()).unwrap(),
        ),
        ("image", build_image_scenario(&ImageParams::desk()).unwrap()),
        (
            "youla seed 0",
            build_youla_scenario(&YoulaParams {
                seed: 0,
                ..YoulaParams::desk()
            })
            .unwrap(),
        ),
    ];
    for (label, s) in &scenarios {
        let first = runs
            .iter()
            .find(|r| r.label == *label)
            .expect("earlier run");
        let (_, again, _) = run(label, s, &s.config);
        checked.push(*label);
        if again.csv.as_bytes() != first.csv.as_bytes() {
            mismatched.push(*label);
        }
    }
    gate.report(
        10,
        mismatched.is_empty(),
        format!("repeated sequential runs of {checked:?}; differing traces {mismatched:?}"),
    );
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut gate = Gate::default();
    let mut runs = Vec::new();

    criterion_1(&mut gate);
    criterion_2(&mut gate);
    criterion_3(&mut gate, &mut runs);
    distortion(&mut gate, &mut runs);
    let hits = thresholded(&mut gate, &mut runs);
    image(&mut gate, &mut runs);
    criterion_4(&mut gate, &runs);
    criterion_5(&mut gate, &runs, hits);
    criterion_9(&mut gate);
    criterion_10(&mut gate, &runs);

    let failures = gate.finish();
    println!(
        "acceptance: {failures} failure(s), {:.1} s total",
        secs(start.elapsed())
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
