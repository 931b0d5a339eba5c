//! Numerical certification of the operator catalog: firm nonexpansiveness
//! of every projector and data map, firm quasinonexpansiveness of the
//! subgradient projectors, and the thresholder identities.

use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::operators::{
    box_projector, certify_firmly_nonexpansive, certify_firmly_quasinonexpansive,
    energy_bound_oracle, fourier_phase_projector, subgradient_projector, total_variation,
    tv_oracle, CertReport, Map, SampleSpec,
};
use crate::scenarios::synth_image;
use crate::tensor::{gaussian_unit_vector, Rng, Tensor};
use crate::thresholds::Level;
use crate::transforms::{
    arctan_distort, bandlimit, block_project, clip, finite_diff, haar2d, haar2d_inv, GaussianKernel,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    FirmlyNonexpansive,
    FirmlyQuasinonexpansive,
    Identity,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Check::FirmlyNonexpansive => "firmly_nonexpansive",
            Check::FirmlyQuasinonexpansive => "firmly_quasinonexpansive",
            Check::Identity => "identity",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertRow {
    pub name: String,
    pub check: Check,
    pub trials: usize,
    pub max_violation: f64,
    pub passed: bool,
}

impl CertRow {
    fn from_report(name: &str, check: Check, r: CertReport) -> Self {
        Self {
            name: name.to_string(),
            check,
            trials: r.trials,
            max_violation: r.max_violation,
            passed: r.passed,
        }
    }
}

pub const IDENTITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct CertifyOptions {
    pub seed: u64,
    pub trials: usize,
    /// Adds a deliberately expansive map (`2 Id`) to the catalog; used to
    /// check that failures are reported.
    pub inject_expansive: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 1000,
            inject_expansive: false,
        }
    }
}

fn lift(f: impl Fn(&Tensor) -> Result<Tensor> + Send + Sync + 'static) -> Map {
    Arc::new(f)
}

/// The firmly nonexpansive maps of the catalog with their sampling regimes.
pub fn catalog(rng: &mut Rng) -> Result<Vec<(&'static str, Map, SampleSpec)>> {
    let signal = (128, 1);
    let image = (32, 32);
    let reference = synth_image(rng, 32);
    let phase = fourier_phase_projector(&reference);
    let boxed = box_projector(0.0, 255.0)?;
    let e = Arc::new(gaussian_unit_vector(rng, 128)?);
    let kernel = Arc::new(GaussianKernel::default());
    let soft_small = Level::new(0.5)?;
    let soft_gamma = Level::new(0.05)?;
    let rho = Level::new(50.0)?;

    let k = Arc::clone(&kernel);
    Ok(vec![
        (
            "clip",
            lift(|x| clip(x, 0.1)),
            SampleSpec {
                shape: signal,
                center: 0.0,
                scale: 0.2,
            },
        ),
        (
            "bandlimit",
            lift(|x| bandlimit(x, 11)),
            SampleSpec::unit(signal),
        ),
        (
            "box_projector",
            lift(move |x| boxed.apply(x)),
            SampleSpec {
                shape: image,
                center: 128.0,
                scale: 150.0,
            },
        ),
        (
            "fourier_phase_projector",
            lift(move |x| phase.apply(x)),
            SampleSpec {
                shape: image,
                center: 100.0,
                scale: 100.0,
            },
        ),
        (
            "soft_threshold",
            lift(move |x| Ok(x.map(|v| soft_small.soft(v)))),
            SampleSpec::unit(signal),
        ),
        (
            "haar_soft_threshold",
            lift(move |x| haar2d_inv(&haar2d(x)?.map(|v| rho.soft(v)))),
            SampleSpec {
                shape: image,
                center: 100.0,
                scale: 100.0,
            },
        ),
        (
            "blur_block_blur",
            lift(move |x| Ok(k.apply(&block_project(&k.apply(x), 8)?))),
            SampleSpec {
                shape: image,
                center: 100.0,
                scale: 100.0,
            },
        ),
        (
            "bandlimited_arctan",
            lift(|x| Ok(bandlimit(&arctan_distort(&bandlimit(x, 11)?, 10.0)?, 11)?.scale(0.1))),
            SampleSpec {
                shape: signal,
                center: 0.0,
                scale: 0.2,
            },
        ),
        (
            "soft_product",
            lift(move |x| Ok(e.scale(soft_gamma.soft(x.dot(&e))))),
            SampleSpec {
                shape: signal,
                center: 0.0,
                scale: 0.01,
            },
        ),
    ])
}

fn grid(lo: f64, hi: f64, points: usize) -> impl Iterator<Item = f64> {
    (0..points).map(move |i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
}

/// Largest deviation between direct soft thresholding and its expression
/// through `q`, on a grid over `[-3 gamma, 3 gamma]`.
pub fn soft_via_q_defect(gamma: f64, points: usize) -> Result<f64> {
    let l = Level::new(gamma)?;
    Ok(grid(-3.0 * gamma, 3.0 * gamma, points)
        .map(|xi| (l.soft(xi) - l.soft_via_q(xi)).abs())
        .fold(0.0, f64::max))
}

/// Largest deviation between soft thresholding and hard thresholding plus
/// correction, on a grid over `[-3 rho, 3 rho]`.
pub fn hard_plus_correction_defect(rho: f64, points: usize) -> Result<f64> {
    let l = Level::new(rho)?;
    Ok(grid(-3.0 * rho, 3.0 * rho, points)
        .map(|xi| {
            let h = l.hard(xi);
            (l.soft(xi) - (h + l.hard_to_soft_correction(h))).abs()
        })
        .fold(0.0, f64::max))
}

fn identity_row(name: &str, points: usize, defect: f64) -> CertRow {
    CertRow {
        name: name.to_string(),
        check: Check::Identity,
        trials: points,
        max_violation: defect,
        passed: defect <= IDENTITY_TOLERANCE,
    }
}

pub fn run_certification(opts: &CertifyOptions) -> Result<Vec<CertRow>> {
    let mut rng = Rng::new(opts.seed);
    let mut rows = Vec::new();

    let mut maps = catalog(&mut rng)?;
    if opts.inject_expansive {
        maps.push((
            "expansive_2x",
            lift(|x| Ok(x.scale(2.0))),
            SampleSpec::unit((16, 1)),
        ));
    }
    for (name, f, spec) in &maps {
        let report = certify_firmly_nonexpansive(f.as_ref(), &mut rng, opts.trials, *spec)?;
        rows.push(CertRow::from_report(
            name,
            Check::FirmlyNonexpansive,
            report,
        ));
    }

    // subgradient projectors against feasible witnesses
    let gamma1 = 1.17;
    let energy = subgradient_projector(energy_bound_oracle(gamma1)?);
    let witnesses: Vec<Tensor> = (0..32)
        .map(|_| {
            let w = rng.gaussian_tensor((128, 1), 1.0);
            let d = finite_diff(&w)?.norm();
            Ok(w.scale(gamma1 * rng.uniform() / d))
        })
        .collect::<Result<_>>()?;
    let report = certify_firmly_quasinonexpansive(
        &energy,
        &mut rng,
        opts.trials,
        SampleSpec {
            shape: (128, 1),
            center: 0.0,
            scale: 1.0,
        },
        &witnesses,
    )?;
    rows.push(CertRow::from_report(
        "energy_bound_subgradient",
        Check::FirmlyQuasinonexpansive,
        report,
    ));

    let bound = 2000.0;
    let tv = subgradient_projector(tv_oracle(bound)?);
    let witnesses: Vec<Tensor> = (0..32)
        .map(|_| {
            let w = synth_image(&mut rng, 32);
            let t = total_variation(&w);
            w.scale(bound * rng.uniform() / t)
        })
        .collect();
    let report = certify_firmly_quasinonexpansive(
        &tv,
        &mut rng,
        opts.trials,
        SampleSpec {
            shape: (32, 32),
            center: 100.0,
            scale: 50.0,
        },
        &witnesses,
    )?;
    rows.push(CertRow::from_report(
        "tv_subgradient",
        Check::FirmlyQuasinonexpansive,
        report,
    ));

    let points = 10_000;
    rows.push(identity_row(
        "soft_via_q_identity",
        points,
        soft_via_q_defect(0.05, points)?,
    ));
    rows.push(identity_row(
        "hard_plus_correction_identity",
        points,
        hard_plus_correction_defect(325.0, points)?,
    ));
    Ok(rows)
}

/// Fixed-width PASS/FAIL table.
pub fn format_table(rows: &[CertRow]) -> String {
    let mut out = format!(
        "{:<32} {:<26} {:>7} {:>14}  {}\n",
        "operator", "check", "trials", "max_violation", "result"
    );
    for r in rows {
        out.push_str(&format!(
            "{:<32} {:<26} {:>7} {:>14.3e}  {}\n",
            r.name,
            r.check.to_string(),
            r.trials,
            r.max_violation,
            if r.passed { "PASS" } else { "FAIL" }
        ));
    }
    out
}
