use super::*;
use crate::solver::solve;

#[test]
fn relative_error_examples() {
    let r = Tensor::signal(vec![1.0, -2.0, 3.0]).unwrap();
    assert_eq!(relative_error(&r, &r).unwrap(), 0.0);
    assert!((relative_error(&Tensor::zeros((3, 1)), &r).unwrap() - 1.0).abs() < 1e-15);
    assert!((relative_error(&r.scale(1.01), &r).unwrap() - 0.01).abs() <= 1e-12);
    assert!(relative_error(&r, &Tensor::zeros((3, 1))).is_err());
}

#[test]
fn band_count_scaling() {
    assert_eq!(scaled_band_count(83, 2048, 256), 11);
    assert_eq!(scaled_band_count(83, 2048, 2048), 83);
    assert_eq!(scaled_band_count(83, 2048, 128), 7);
}

#[test]
fn distortion_scenario_is_consistent() {
    let s = build_distortion_scenario(&DistortionParams::desk()).unwrap();
    assert!(s.feasibility_defect().unwrap() <= 1e-9);
    assert!(s.metric("f1", &s.ground_truth).unwrap() <= 0.0);
    let r2 = &s.observations[0].1;
    assert!(r2.as_slice().iter().all(|v| v.abs() <= 0.1));
    let mut bad = DistortionParams::desk();
    bad.band_count = 12;
    assert!(build_distortion_scenario(&bad).is_err());
    bad.band_count = 257;
    assert!(build_distortion_scenario(&bad).is_err());
}

#[test]
fn full_scale_distortion_is_consistent() {
    let s = build_distortion_scenario(&DistortionParams::full()).unwrap();
    assert!(s.feasibility_defect().unwrap() <= 1e-9);
}

#[test]
fn thresholded_products_scenario_is_consistent() {
    let p = ThresholdedParams::desk();
    let s = build_thresholded_products_scenario(&p).unwrap();
    assert_eq!(s.problem.len(), 300);
    assert_eq!(s.config.control.m, 12);
    for (_, op) in s.problem.ops() {
        assert!(op.displacement(&s.ground_truth).unwrap().norm() <= 1e-12);
    }
    let mut bad = p.clone();
    bad.block = 7;
    assert!(build_thresholded_products_scenario(&bad).is_err());
}

#[test]
fn zero_observation_gives_zero_target() {
    // pick a large gamma so that some observations vanish
    let p = ThresholdedParams {
        gamma: 0.4,
        ..ThresholdedParams::desk()
    };
    let s = build_thresholded_products_scenario(&p).unwrap();
    let zero = s
        .observations
        .iter()
        .find(|(_, r)| r.as_slice()[0] == 0.0)
        .unwrap()
        .0;
    let op = s.problem.op(zero).unwrap();
    // displacement at 0 is p - F(0) = p
    let d = op.displacement(&Tensor::zeros(s.problem.shape())).unwrap();
    assert_eq!(d.norm(), 0.0);
}

#[test]
fn image_scenario_is_consistent() {
    let s = build_image_scenario(&ImageParams::desk()).unwrap();
    assert_eq!(s.problem.len(), 5);
    assert!(
        s.feasibility_defect().unwrap() <= 1e-9,
        "{}",
        s.feasibility_defect().unwrap()
    );
    assert_eq!(s.observations[1].1.shape(), (8, 8));
    let kept = s.metric("kept_fraction", &s.ground_truth).unwrap();
    assert!((0.05..=0.15).contains(&kept), "{kept}");
    let truth = s.ground_truth.as_slice();
    assert!(truth
        .iter()
        .all(|v| (0.0..=255.0).contains(v) && v.fract() == 0.0));
    let mut bad = ImageParams::desk();
    bad.n = 48;
    assert!(build_image_scenario(&bad).is_err());
    bad.n = 64;
    bad.block = 7;
    assert!(build_image_scenario(&bad).is_err());
}

#[test]
fn full_image_has_eight_by_eight_observation() {
    let s = build_image_scenario(&ImageParams::full()).unwrap();
    assert_eq!(s.observations[1].1.shape(), (8, 8));
}

#[test]
fn youla_full_space_case() {
    let p = YoulaParams {
        dim_v1: 32,
        ..YoulaParams::desk()
    };
    let s = build_youla_scenario(&p).unwrap();
    let (x, trace) = solve(&s.problem, &s.config).unwrap();
    assert!(trace.converged());
    assert!(s.metric("data_residual", &x).unwrap() <= 1e-10);
    assert!(build_youla_scenario(&YoulaParams {
        dim_v2: 0,
        ..YoulaParams::desk()
    })
    .is_err());
    assert!(build_youla_scenario(&YoulaParams {
        dim_v1: 33,
        ..YoulaParams::desk()
    })
    .is_err());
}

#[test]
fn builders_are_deterministic() {
    let a = build_thresholded_products_scenario(&ThresholdedParams::desk()).unwrap();
    let b = build_thresholded_products_scenario(&ThresholdedParams::desk()).unwrap();
    assert_eq!(a.ground_truth, b.ground_truth);
    assert_eq!(a.observations, b.observations);
    let a = build_image_scenario(&ImageParams::desk()).unwrap();
    let b = build_image_scenario(&ImageParams::desk()).unwrap();
    assert_eq!(a.ground_truth, b.ground_truth);
}

#[test]
fn presets_by_name() {
    for name in SCENARIOS {
        let p = ScenarioParams::preset(name, Preset::Desk).unwrap();
        assert_eq!(p.name(), name);
    }
    assert!(ScenarioParams::preset("nope", Preset::Desk).is_err());
}
