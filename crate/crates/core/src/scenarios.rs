//! End-to-end problem builders: synthesize a ground truth, apply the forward
//! models, and assemble the fixed-point problem with its solver settings.
//!
//! Each builder has two presets: the original experiment sizes (`full`) and
//! smaller sizes that run in seconds (`desk`).

use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::operators::{
    box_projector, data_operator, energy_bound_oracle, fourier_phase_projector, map,
    subgradient_projector, subspace_projection, total_variation, tv_oracle, FixedPointOp,
};
use crate::problem::Problem;
use crate::solver::{ControlPolicy, RelaxationPolicy, SolverConfig, WeightPolicy};
use crate::tensor::{gaussian_unit_vector, Rng, Tensor};
use crate::thresholds::Level;
use crate::transforms::{
    arctan_distort, bandlimit, block_average, block_project, block_replicate, clip, finite_diff,
    haar2d, haar2d_inv, GaussianKernel,
};

type MetricFn = Arc<dyn Fn(&Tensor) -> Result<f64> + Send + Sync>;

/// A named scalar diagnostic evaluated on a candidate solution.
#[derive(Clone)]
pub struct Metric {
    pub name: &'static str,
    eval: MetricFn,
}

impl Metric {
    fn new(name: &'static str, f: impl Fn(&Tensor) -> Result<f64> + Send + Sync + 'static) -> Self {
        Self {
            name,
            eval: Arc::new(f),
        }
    }

    pub fn eval(&self, x: &Tensor) -> Result<f64> {
        (self.eval)(x)
    }
}

impl fmt::Debug for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Metric({})", self.name)
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: &'static str,
    pub ground_truth: Tensor,
    pub observations: Vec<(usize, Tensor)>,
    pub problem: Problem,
    pub config: SolverConfig,
    pub metrics: Vec<Metric>,
}

impl Scenario {
    /// `(id, name, ||T_i x - x||)` for every operator.
    pub fn op_residuals(&self, x: &Tensor) -> Result<Vec<(usize, String, f64)>> {
        self.problem
            .ops()
            .map(|(id, op)| Ok((*id, op.name().to_string(), op.displacement(x)?.norm())))
            .collect()
    }

    pub fn max_residual(&self, x: &Tensor) -> Result<f64> {
        Ok(self
            .op_residuals(x)?
            .into_iter()
            .fold(0.0, |m, (_, _, r)| m.max(r)))
    }

    /// Largest displacement at the ground truth; zero up to rounding for a
    /// consistent construction.
    pub fn feasibility_defect(&self) -> Result<f64> {
        self.max_residual(&self.ground_truth)
    }

    pub fn evaluate_metrics(&self, x: &Tensor) -> Result<Vec<(&'static str, f64)>> {
        self.metrics
            .iter()
            .map(|m| Ok((m.name, m.eval(x)?)))
            .collect()
    }

    pub fn metric(&self, name: &str, x: &Tensor) -> Result<f64> {
        self.metrics
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| invalid("metric", format!("unknown metric {name}")))?
            .eval(x)
    }
}

/// `||x - reference|| / ||reference||`.
pub fn relative_error(x: &Tensor, reference: &Tensor) -> Result<f64> {
    x.ensure_shape(reference)?;
    let denom = reference.norm();
    if denom == 0.0 {
        return Err(invalid("reference", "must be nonzero"));
    }
    Ok(x.distance(reference) / denom)
}

fn base_config(reference: &Tensor, tol: f64, max_iters: usize) -> SolverConfig {
    SolverConfig {
        epsilon: None,
        weights: WeightPolicy::Uniform,
        control: ControlPolicy::full_parallel(),
        relaxation: RelaxationPolicy::Emopsp,
        residual_tol: tol,
        max_iters,
        x0: Some(Tensor::zeros(reference.shape())),
        reference: Some(reference.clone()),
        threads: 1,
    }
}

/// Piecewise-smooth test signal: smooth bumps riding on a few linear ramps,
/// scaled to peak magnitude one.
pub fn synth_signal(rng: &mut Rng, n: usize) -> Tensor {
    let nf = n as f64;
    let mut v = vec![0.0; n];
    for _ in 0..6 {
        let center = rng.uniform_in(0.1, 0.9) * nf;
        let width = rng.uniform_in(0.02, 0.08) * nf;
        let amp = rng.uniform_in(0.3, 1.0) * if rng.uniform() < 0.5 { -1.0 } else { 1.0 };
        for (i, s) in v.iter_mut().enumerate() {
            let t = (i as f64 - center) / width;
            *s += amp * (-0.5 * t * t).exp();
        }
    }
    // ramps: a continuous piecewise-linear trend through a few knots
    let knots: Vec<(f64, f64)> = (0..=4)
        .map(|k| (k as f64 / 4.0 * (nf - 1.0), rng.uniform_in(-0.4, 0.4)))
        .collect();
    for (i, s) in v.iter_mut().enumerate() {
        let t = i as f64;
        let seg = knots
            .windows(2)
            .find(|w| t <= w[1].0)
            .unwrap_or(&knots[3..5]);
        let (a, b) = (seg[0], seg[1]);
        *s += a.1 + (b.1 - a.1) * (t - a.0) / (b.0 - a.0);
    }
    let peak = v.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    Tensor::from_raw((n, 1), v.into_iter().map(|s| s / peak).collect())
}

/// Test image in `[0, 255]` built from Gaussian blobs and rectangles,
/// quantized to integers.
pub fn synth_image(rng: &mut Rng, n: usize) -> Tensor {
    let nf = n as f64;
    let mut img = vec![40.0; n * n];
    for _ in 0..5 {
        let (cy, cx) = (rng.uniform() * nf, rng.uniform() * nf);
        let w = rng.uniform_in(0.05, 0.2) * nf;
        let amp = rng.uniform_in(60.0, 160.0);
        for r in 0..n {
            for c in 0..n {
                let d2 = ((r as f64 - cy).powi(2) + (c as f64 - cx).powi(2)) / (w * w);
                img[r * n + c] += amp * (-0.5 * d2).exp();
            }
        }
    }
    for _ in 0..4 {
        let (r0, c0) = (rng.below(n * 3 / 4), rng.below(n * 3 / 4));
        let (h, w) = (n / 8 + rng.below(n / 4), n / 8 + rng.below(n / 4));
        let level = rng.uniform_in(-80.0, 120.0);
        for r in r0..(r0 + h).min(n) {
            for c in c0..(c0 + w).min(n) {
                img[r * n + c] += level;
            }
        }
    }
    Tensor::from_raw(
        (n, n),
        img.into_iter()
            .map(|v| v.clamp(0.0, 255.0).round())
            .collect(),
    )
}

// ---------------------------------------------------------------------------
// Restoration from clipped and distorted bandlimited observations.

#[derive(Debug, Clone, PartialEq)]
pub struct DistortionParams {
    pub n: usize,
    /// Bound on the energy of finite differences.
    pub gamma1: f64,
    /// Clipping level.
    pub gamma2: f64,
    /// Number of retained DFT coefficients (odd).
    pub band_count: usize,
    /// Arctan gain.
    pub gamma3: f64,
    pub seed: u64,
    pub tol: f64,
    pub max_iters: usize,
}

impl DistortionParams {
    pub fn full() -> Self {
        Self {
            n: 2048,
            gamma1: 1.17,
            gamma2: 0.1,
            band_count: 83,
            gamma3: 10.0,
            seed: 2,
            tol: 1e-8,
            max_iters: 100_000,
        }
    }

    /// `N = 256` with the band scaled proportionally (rounded up to odd).
    pub fn desk() -> Self {
        let n = 256;
        Self {
            n,
            band_count: scaled_band_count(83, 2048, n),
            max_iters: 50_000,
            ..Self::full()
        }
    }
}

/// `ceil(count * n / reference_n)`, bumped to the next odd number.
pub fn scaled_band_count(count: usize, reference_n: usize, n: usize) -> usize {
    let c = (count * n).div_ceil(reference_n).max(1);
    if c.is_multiple_of(2) {
        c + 1
    } else {
        c
    }
}

/// Ratio between the energy bound and the ground truth's actual
/// finite-difference energy when the signal has to be rescaled.
const ENERGY_MARGIN: f64 = 1.05;

pub fn build_distortion_scenario(p: &DistortionParams) -> Result<Scenario> {
    if p.band_count.is_multiple_of(2) || p.band_count > p.n {
        return Err(invalid(
            "band_count",
            format!("must be odd and at most N = {}, got {}", p.n, p.band_count),
        ));
    }
    if p.n < 2 {
        return Err(invalid("n", "must be at least 2"));
    }
    for (name, v) in [
        ("gamma1", p.gamma1),
        ("gamma2", p.gamma2),
        ("gamma3", p.gamma3),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(invalid(name, format!("must be positive, got {v}")));
        }
    }
    let mut rng = Rng::new(p.seed);
    let mut xbar = synth_signal(&mut rng, p.n);
    let energy = finite_diff(&xbar)?.norm();
    if energy * ENERGY_MARGIN > p.gamma1 {
        xbar = xbar.scale(p.gamma1 / (ENERGY_MARGIN * energy));
    }

    let (gamma2, gamma3, count) = (p.gamma2, p.gamma3, p.band_count);
    let r2 = clip(&xbar, gamma2)?;
    let r3 = arctan_distort(&bandlimit(&xbar, count)?, gamma3)?;

    let mut problem = Problem::new(xbar.shape());
    let energy_op = subgradient_projector(energy_bound_oracle(p.gamma1)?).with_name("energy_bound");
    problem.add_constraint(1, energy_op)?;
    let f2 = map(move |x| clip(x, gamma2));
    problem.add_data(2, data_operator(f2, r2.clone()).with_name("clip"))?;
    // S3 = L / gamma3, so S3 R3 = L theta(L .) / gamma3
    let f3 = map(move |x| {
        let inner = arctan_distort(&bandlimit(x, count)?, gamma3)?;
        Ok(bandlimit(&inner, count)?.scale(1.0 / gamma3))
    });
    let p3 = bandlimit(&r3, count)?.scale(1.0 / gamma3);
    problem.add_data(
        3,
        data_operator(f3, p3.clone()).with_name("bandlimited_arctan"),
    )?;

    let gamma1 = p.gamma1;
    let r2m = r2.clone();
    let r3m = r3.clone();
    let metrics = vec![
        Metric::new("f1", move |x| Ok(finite_diff(x)?.norm() - gamma1)),
        Metric::new("clip_residual_inf", move |x| {
            Ok(clip(x, gamma2)?.sub(&r2m).norm_inf())
        }),
        Metric::new("s3_residual", move |x| {
            let inner = arctan_distort(&bandlimit(x, count)?, gamma3)?;
            Ok(bandlimit(&inner, count)?.scale(1.0 / gamma3).distance(&p3))
        }),
        Metric::new("r3_residual_inf", move |x| {
            Ok(arctan_distort(&bandlimit(x, count)?, gamma3)?
                .sub(&r3m)
                .norm_inf())
        }),
    ];
    Ok(Scenario {
        name: "distortion",
        config: base_config(&xbar, p.tol, p.max_iters),
        observations: vec![(2, r2), (3, r3)],
        ground_truth: xbar,
        problem,
        metrics,
    })
}

// ---------------------------------------------------------------------------
// Reconstruction from thresholded scalar products.

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdedParams {
    pub n: usize,
    /// Number of measurements.
    pub m: usize,
    pub gamma: f64,
    /// Operators per block; blocks are swept cyclically.
    pub block: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_iters: usize,
}

impl ThresholdedParams {
    pub fn full() -> Self {
        Self {
            n: 1024,
            m: 1200,
            gamma: 0.05,
            block: 100,
            seed: 2,
            tol: 1e-10,
            max_iters: 100_000,
        }
    }

    pub fn desk() -> Self {
        Self {
            n: 128,
            m: 300,
            block: 25,
            max_iters: 50_000,
            ..Self::full()
        }
    }
}

/// The measurement vectors `e_k` of a thresholded-products scenario.
pub fn measurement_vectors(p: &ThresholdedParams) -> Result<Vec<Tensor>> {
    // a stream separate from the ground truth's
    let mut rng = Rng::new(p.seed ^ 0x9e37_79b9_7f4a_7c15);
    (0..p.m)
        .map(|_| gaussian_unit_vector(&mut rng, p.n))
        .collect()
}

pub fn build_thresholded_products_scenario(p: &ThresholdedParams) -> Result<Scenario> {
    if p.block == 0 || p.m == 0 || !p.m.is_multiple_of(p.block) {
        return Err(invalid(
            "block",
            format!("{} must divide m = {}", p.block, p.m),
        ));
    }
    let level = Level::new(p.gamma)?;
    let xbar = synth_signal(&mut Rng::new(p.seed), p.n);
    let vectors = Arc::new(measurement_vectors(p)?);

    let mut problem = Problem::new(xbar.shape());
    let mut observations = Vec::with_capacity(p.m);
    let mut r = Vec::with_capacity(p.m);
    for (k, e) in vectors.iter().enumerate() {
        let id = k + 1;
        let rk = level.q(xbar.dot(e));
        r.push(rk);
        observations.push((id, Tensor::from_raw((1, 1), vec![rk])));
        let e = Arc::new(e.clone());
        let target = e.scale(level.lift_q(rk));
        let fe = Arc::clone(&e);
        let f = map(move |x| Ok(fe.scale(level.soft(x.dot(&fe)))));
        problem.add_data(
            id,
            data_operator(f, target).with_name(format!("product_{id}")),
        )?;
    }
    let ids: Vec<usize> = (1..=p.m).collect();
    let mut config = base_config(&xbar, p.tol, p.max_iters);
    config.control = ControlPolicy::consecutive_blocks(&ids, p.block);

    let r = Arc::new(r);
    let metrics = vec![Metric::new("max_q_residual", move |x| {
        Ok(vectors
            .iter()
            .zip(r.iter())
            .map(|(e, rk)| (level.q(x.dot(e)) - rk).abs())
            .fold(0.0, f64::max))
    })];
    Ok(Scenario {
        name: "thresholded_products",
        ground_truth: xbar,
        observations,
        problem,
        config,
        metrics,
    })
}

// ---------------------------------------------------------------------------
// Image recovery from phase, bounds, total variation, compressed wavelet
// coefficients and a downsampled blurred image.

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rho {
    Fixed(f64),
    /// Pick the threshold so this fraction of Haar coefficients survives.
    KeepFraction(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImageParams {
    pub n: usize,
    /// TV bound as a multiple of the ground truth's TV.
    pub tv_factor: f64,
    pub rho: Rho,
    pub blur_size: usize,
    pub blur_variance: f64,
    pub block: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_iters: usize,
}

impl ImageParams {
    pub fn full() -> Self {
        Self {
            n: 256,
            tv_factor: 1.2,
            rho: Rho::Fixed(325.0),
            blur_size: 5,
            blur_variance: 1.0,
            block: 32,
            seed: 3,
            tol: 1e-6,
            max_iters: 100_000,
        }
    }

    pub fn desk() -> Self {
        Self {
            n: 64,
            rho: Rho::KeepFraction(0.05),
            block: 8,
            max_iters: 50_000,
            ..Self::full()
        }
    }
}

/// Threshold leaving `fraction` of `coeffs` strictly above it in magnitude.
fn threshold_for_fraction(coeffs: &Tensor, fraction: f64) -> Result<f64> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(invalid(
            "rho",
            format!("keep fraction must lie in (0, 1), got {fraction}"),
        ));
    }
    let mut mags: Vec<f64> = coeffs.as_slice().iter().map(|v| v.abs()).collect();
    mags.sort_by(|a, b| b.total_cmp(a));
    let keep = ((fraction * mags.len() as f64).round() as usize).clamp(1, mags.len() - 1);
    // midway between the last kept and first dropped magnitude
    Ok(0.5 * (mags[keep - 1] + mags[keep]))
}

pub fn build_image_scenario(p: &ImageParams) -> Result<Scenario> {
    if !p.n.is_power_of_two() || p.n < 2 {
        return Err(invalid("n", format!("must be a power of two, got {}", p.n)));
    }
    if p.block == 0 || !p.n.is_multiple_of(p.block) {
        return Err(invalid(
            "block",
            format!("{} must divide N = {}", p.block, p.n),
        ));
    }
    if !(p.tv_factor >= 1.0) {
        return Err(invalid(
            "tv_factor",
            "must be at least 1 for the truth to be feasible",
        ));
    }
    let kernel = Arc::new(GaussianKernel::new(p.blur_size, p.blur_variance)?);
    let xbar = synth_image(&mut Rng::new(p.seed), p.n);

    let wbar = haar2d(&xbar)?;
    let rho = match p.rho {
        Rho::Fixed(r) => r,
        Rho::KeepFraction(f) => threshold_for_fraction(&wbar, f)?,
    };
    let level = Level::new(rho)?;
    let r4 = wbar.map(|v| level.hard(v));
    let block = p.block;
    let r5 = block_average(&kernel.apply(&xbar), block)?;
    let tv_bound = p.tv_factor * total_variation(&xbar);

    let mut problem = Problem::new(xbar.shape());
    problem.add_constraint(1, fourier_phase_projector(&xbar))?;
    problem.add_constraint(2, box_projector(0.0, 255.0)?)?;
    let tv_op = subgradient_projector(tv_oracle(tv_bound)?).with_name("total_variation");
    problem.add_constraint(3, tv_op)?;

    // S4 R4 = W^-1 soft W; S4 r4 adds the hard-to-soft offset before inverting
    let f4 = map(move |x| haar2d_inv(&haar2d(x)?.map(|v| level.soft(v))));
    let p4 = haar2d_inv(&r4.map(|v| v + level.hard_to_soft_correction(v)))?;
    problem.add_data(4, data_operator(f4, p4).with_name("haar_soft"))?;

    // S5 R5 = H P H with P the projection onto block-constant images
    let k5 = Arc::clone(&kernel);
    let f5 = map(move |x| Ok(k5.apply(&block_project(&k5.apply(x), block)?)));
    let p5 = kernel.apply(&block_replicate(&r5, block)?);
    problem.add_data(5, data_operator(f5, p5).with_name("blur_block"))?;

    let r4_obs = r4.clone();
    let r4m = r4.clone();
    let r5m = r5.clone();
    let km = Arc::clone(&kernel);
    let metrics = vec![
        Metric::new("tv_excess", move |x| Ok(total_variation(x) - tv_bound)),
        Metric::new("box_violation", |x| {
            Ok(x.as_slice()
                .iter()
                .map(|v| (-v).max(v - 255.0).max(0.0))
                .fold(0.0, f64::max))
        }),
        // distance to the preimage of r4: hard thresholding jumps at +-rho, so
        // a coefficient that must vanish only needs to stay within the band
        Metric::new("r4_residual_inf", move |x| {
            let w = haar2d(x)?;
            Ok(w.as_slice()
                .iter()
                .zip(r4m.as_slice())
                .map(|(&v, &r)| {
                    if r == 0.0 {
                        (v.abs() - rho).max(0.0)
                    } else {
                        (v - r).abs()
                    }
                })
                .fold(0.0, f64::max))
        }),
        Metric::new("r5_residual_inf", move |x| {
            Ok(block_average(&km.apply(x), block)?.sub(&r5m).norm_inf())
        }),
        Metric::new("rho", move |_| Ok(rho)),
        Metric::new("kept_fraction", move |_| {
            let kept = r4.as_slice().iter().filter(|v| **v != 0.0).count();
            Ok(kept as f64 / r4.len() as f64)
        }),
    ];
    Ok(Scenario {
        name: "image",
        config: base_config(&xbar, p.tol, p.max_iters),
        observations: vec![(4, r4_obs), (5, r5)],
        ground_truth: xbar,
        problem,
        metrics,
    })
}

// ---------------------------------------------------------------------------
// Recovery of x in V1 from its projection onto V2.

#[derive(Debug, Clone, PartialEq)]
pub struct YoulaParams {
    pub n: usize,
    pub dim_v1: usize,
    pub dim_v2: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_iters: usize,
}

impl YoulaParams {
    pub fn desk() -> Self {
        Self {
            n: 32,
            dim_v1: 12,
            dim_v2: 20,
            seed: 4,
            tol: 1e-12,
            max_iters: 100_000,
        }
    }
}

/// Orthonormal basis of a random `dim`-dimensional subspace of `R^n`
/// (Gram-Schmidt with one reorthogonalization pass).
pub fn random_subspace(rng: &mut Rng, n: usize, dim: usize) -> Vec<Tensor> {
    let mut basis: Vec<Tensor> = Vec::with_capacity(dim);
    while basis.len() < dim {
        let mut v = rng.gaussian_tensor((n, 1), 1.0);
        for _ in 0..2 {
            for b in &basis {
                v.axpy_in_place(-b.dot(&v), b);
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            basis.push(v.scale(1.0 / norm));
        }
    }
    basis
}

/// Bases of `V1`, `V2` and the ground truth `xbar in V1`.
pub fn youla_instance(p: &YoulaParams) -> Result<(Vec<Tensor>, Vec<Tensor>, Tensor)> {
    for (name, d) in [("dim_v1", p.dim_v1), ("dim_v2", p.dim_v2)] {
        if d == 0 || d > p.n {
            return Err(invalid(name, format!("must lie in 1..={}, got {d}", p.n)));
        }
    }
    let mut rng = Rng::new(p.seed);
    let v1 = random_subspace(&mut rng, p.n, p.dim_v1);
    let v2 = random_subspace(&mut rng, p.n, p.dim_v2);
    let mut xbar = Tensor::zeros((p.n, 1));
    for b in &v1 {
        xbar.axpy_in_place(rng.gaussian(), b);
    }
    Ok((v1, v2, xbar))
}

pub fn build_youla_scenario(p: &YoulaParams) -> Result<Scenario> {
    let (v1, v2, xbar) = youla_instance(p)?;
    let full = p.dim_v1 == p.n;
    let p1 = subspace_projection(Arc::new(v1));
    let p2 = subspace_projection(Arc::new(v2));
    let r2 = p2(&xbar)?;

    let mut problem = Problem::new(xbar.shape());
    let v1_op = if full {
        FixedPointOp::projector("whole_space", map(|x| Ok(x.clone())))
    } else {
        FixedPointOp::projector("subspace_v1", p1.clone())
    };
    problem.add_constraint(1, v1_op)?;
    problem.add_data(
        2,
        data_operator(p2.clone(), r2.clone()).with_name("projection_v2"),
    )?;

    let r2m = r2.clone();
    let metrics = vec![
        Metric::new("data_residual", move |x| Ok(p2(x)?.distance(&r2m))),
        Metric::new("v1_residual", move |x| {
            Ok(if full { 0.0 } else { p1(x)?.distance(x) })
        }),
    ];
    Ok(Scenario {
        name: "youla",
        config: base_config(&xbar, p.tol, p.max_iters),
        observations: vec![(2, r2)],
        ground_truth: xbar,
        problem,
        metrics,
    })
}

/// Names accepted by [`Preset`]-based builders and the CLI.
pub const SCENARIOS: [&str; 4] = ["distortion", "thresholded_products", "image", "youla"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Desk,
    Full,
}

/// Parameters for any scenario.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioParams {
    Distortion(DistortionParams),
    ThresholdedProducts(ThresholdedParams),
    Image(ImageParams),
    Youla(YoulaParams),
}

impl ScenarioParams {
    pub fn preset(name: &str, preset: Preset) -> Result<Self> {
        let full = preset == Preset::Full;
        Ok(match name {
            "distortion" => Self::Distortion(if full {
                DistortionParams::full()
            } else {
                DistortionParams::desk()
            }),
            "thresholded_products" => Self::ThresholdedProducts(if full {
                ThresholdedParams::full()
            } else {
                ThresholdedParams::desk()
            }),
            "image" => Self::Image(if full {
                ImageParams::full()
            } else {
                ImageParams::desk()
            }),
            "youla" => Self::Youla(YoulaParams::desk()),
            other => {
                return Err(Error::InvalidParameter {
                    name: "scenario",
                    reason: format!("unknown scenario `{other}`; expected one of {SCENARIOS:?}"),
                })
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Distortion(_) => "distortion",
            Self::ThresholdedProducts(_) => "thresholded_products",
            Self::Image(_) => "image",
            Self::Youla(_) => "youla",
        }
    }

    pub fn build(&self) -> Result<Scenario> {
        match self {
            Self::Distortion(p) => build_distortion_scenario(p),
            Self::ThresholdedProducts(p) => build_thresholded_products_scenario(p),
            Self::Image(p) => build_image_scenario(p),
            Self::Youla(p) => build_youla_scenario(p),
        }
    }
}

#[cfg(test)]
mod tests;
