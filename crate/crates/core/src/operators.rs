//! The fixed-point operator catalog.
//!
//! Every operator is consumed by the solver through its displacement
//! `x -> T x - x`. Three kinds exist: exact projectors onto closed convex
//! sets, subgradient projectors onto sublevel sets `{f <= 0}`, and data
//! operators `T = p + Id - F` built from a firmly nonexpansive `F` and a
//! target `p`, whose fixed points are exactly the solutions of `F x = p`.

use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::tensor::{Rng, Tensor};
use crate::transforms::{self, complex_real_part, fft2_in_place, real_to_complex};

/// A fallible tensor map shared between operators and threads.
pub type Map = Arc<dyn Fn(&Tensor) -> Result<Tensor> + Send + Sync>;

pub fn map(f: impl Fn(&Tensor) -> Result<Tensor> + Send + Sync + 'static) -> Map {
    Arc::new(f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    Projector,
    SubgradientProjector,
    DataOp,
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OpKind::Projector => "projector",
            OpKind::SubgradientProjector => "subgradient_projector",
            OpKind::DataOp => "data_op",
        })
    }
}

/// A convex function with a deterministic subgradient selection.
pub trait ConvexFunction: Send + Sync {
    fn value(&self, x: &Tensor) -> Result<f64>;
    fn subgradient(&self, x: &Tensor) -> Result<Tensor>;
}

#[derive(Clone)]
enum Body {
    Projector(Map),
    Subgradient(Arc<dyn ConvexFunction>),
    Data { map: Map, target: Tensor },
}

/// An operator exposing its displacement `T x - x`.
#[derive(Clone)]
pub struct FixedPointOp {
    name: String,
    body: Body,
}

impl fmt::Debug for FixedPointOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FixedPointOp")
            .field("name", &self.name)
            .field("kind", &self.kind())
            .finish()
    }
}

impl FixedPointOp {
    /// Wraps an exact projector onto a closed convex set.
    pub fn projector(name: impl Into<String>, proj: Map) -> Self {
        Self {
            name: name.into(),
            body: Body::Projector(proj),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> OpKind {
        match self.body {
            Body::Projector(_) => OpKind::Projector,
            Body::Subgradient(_) => OpKind::SubgradientProjector,
            Body::Data { .. } => OpKind::DataOp,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// `T x - x`.
    pub fn displacement(&self, x: &Tensor) -> Result<Tensor> {
        match &self.body {
            Body::Projector(p) => {
                let px = p(x)?;
                x.ensure_shape(&px)?;
                Ok(px.sub(x))
            }
            Body::Subgradient(f) => {
                let value = f.value(x)?;
                if value <= 0.0 {
                    return Ok(Tensor::zeros(x.shape()));
                }
                let u = f.subgradient(x)?;
                x.ensure_shape(&u)?;
                let u2 = u.norm_sq();
                if u2 == 0.0 {
                    return Err(Error::ZeroSubgradient { value });
                }
                Ok(u.scale(-value / u2))
            }
            Body::Data { map, target } => {
                x.ensure_shape(target)?;
                let fx = map(x)?;
                target.ensure_shape(&fx)?;
                Ok(target.sub(&fx))
            }
        }
    }

    /// `T x`.
    pub fn apply(&self, x: &Tensor) -> Result<Tensor> {
        Ok(x.add(&self.displacement(x)?))
    }

    /// The convex function behind a subgradient projector.
    pub fn function(&self) -> Option<&Arc<dyn ConvexFunction>> {
        match &self.body {
            Body::Subgradient(f) => Some(f),
            _ => None,
        }
    }
}

pub fn box_projector(lo: f64, hi: f64) -> Result<FixedPointOp> {
    if !(lo < hi) {
        return Err(invalid("box", format!("need lo < hi, got [{lo}, {hi}]")));
    }
    Ok(FixedPointOp::projector(
        format!("box[{lo},{hi}]"),
        map(move |x| Ok(x.map(|v| v.clamp(lo, hi)))),
    ))
}

/// Exact projector onto the hyperplane `{x : <a, x> = b}`.
pub fn hyperplane_projector(a: Tensor, b: f64) -> Result<FixedPointOp> {
    let a2 = a.norm_sq();
    if a2 == 0.0 {
        return Err(invalid("a", "hyperplane normal must be nonzero"));
    }
    Ok(FixedPointOp::projector(
        "hyperplane",
        map(move |x| {
            x.ensure_shape(&a)?;
            let mut out = x.clone();
            out.axpy_in_place((b - a.dot(x)) / a2, &a);
            Ok(out)
        }),
    ))
}

/// Orthogonal projection onto `span(basis)`; `basis` must be orthonormal.
pub fn subspace_projection(basis: Arc<Vec<Tensor>>) -> Map {
    map(move |x| {
        let mut out = Tensor::zeros(x.shape());
        for b in basis.iter() {
            x.ensure_shape(b)?;
            out.axpy_in_place(b.dot(x), b);
        }
        Ok(out)
    })
}

pub fn subspace_projector(basis: Vec<Tensor>) -> FixedPointOp {
    FixedPointOp::projector("subspace", subspace_projection(Arc::new(basis)))
}

/// Projector onto `{x : phase(DFT x) = phase(DFT reference)}`.
///
/// Each DFT bin is a ray `{t p : t >= 0}` with unit phase `p`; a coefficient
/// `c` maps to `max(Re(c conj p), 0) p`. Bins where the reference vanishes
/// (relative to its largest coefficient) are left unconstrained. Phases of
/// conjugate partner bins are tied exactly so the output stays real.
#[derive(Debug, Clone)]
pub struct PhaseProjector {
    shape: (usize, usize),
    phases: Vec<Option<Complex<f64>>>,
}

impl PhaseProjector {
    const ZERO_RELATIVE: f64 = 1e-12;

    pub fn new(reference: &Tensor) -> Self {
        let shape = reference.shape();
        let (rows, cols) = shape;
        let mut buf = real_to_complex(reference);
        fft2_in_place(shape, &mut buf, false);
        let peak = buf.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        let cutoff = peak * Self::ZERO_RELATIVE;
        let mut phases = vec![None; rows * cols];
        for r in 0..rows {
            for c in 0..cols {
                let i = r * cols + c;
                let j = ((rows - r) % rows) * cols + (cols - c) % cols;
                if j < i {
                    phases[i] = phases[j].map(|p: Complex<f64>| p.conj());
                    continue;
                }
                let coef = buf[i];
                phases[i] = if j == i {
                    // self-conjugate bin: the coefficient is real
                    (coef.re.abs() > cutoff).then(|| Complex::new(coef.re.signum(), 0.0))
                } else {
                    (coef.norm() > cutoff).then(|| coef / coef.norm())
                };
            }
        }
        Self { shape, phases }
    }

    pub fn project(&self, x: &Tensor) -> Result<Tensor> {
        if x.shape() != self.shape {
            return Err(Error::ShapeMismatch {
                left: x.shape(),
                right: self.shape,
            });
        }
        let mut buf = real_to_complex(x);
        fft2_in_place(self.shape, &mut buf, false);
        for (c, p) in buf.iter_mut().zip(&self.phases) {
            if let Some(p) = p {
                let t = (*c * p.conj()).re.max(0.0);
                *c = p * t;
            }
        }
        fft2_in_place(self.shape, &mut buf, true);
        Ok(complex_real_part(self.shape, &buf))
    }

    pub fn free_bins(&self) -> usize {
        self.phases.iter().filter(|p| p.is_none()).count()
    }
}

pub fn fourier_phase_projector(reference: &Tensor) -> FixedPointOp {
    let proj = PhaseProjector::new(reference);
    FixedPointOp::projector("fourier_phase", map(move |x| proj.project(x)))
}

pub fn subgradient_projector(f: impl ConvexFunction + 'static) -> FixedPointOp {
    FixedPointOp {
        name: "subgradient".into(),
        body: Body::Subgradient(Arc::new(f)),
    }
}

/// `T = p + Id - F`, so `displacement(x) = p - F x`.
pub fn data_operator(f: Map, p: Tensor) -> FixedPointOp {
    FixedPointOp {
        name: "data".into(),
        body: Body::Data { map: f, target: p },
    }
}

/// `f(x) = <a, x> - b`.
#[derive(Debug, Clone)]
pub struct AffineFunction {
    pub a: Tensor,
    pub b: f64,
}

impl ConvexFunction for AffineFunction {
    fn value(&self, x: &Tensor) -> Result<f64> {
        x.ensure_shape(&self.a)?;
        Ok(self.a.dot(x) - self.b)
    }

    fn subgradient(&self, _x: &Tensor) -> Result<Tensor> {
        Ok(self.a.clone())
    }
}

/// `f(x) = ||D x|| - bound` with `D` the forward difference operator.
#[derive(Debug, Clone, Copy)]
pub struct EnergyBound {
    bound: f64,
}

pub fn energy_bound_oracle(bound: f64) -> Result<EnergyBound> {
    if !(bound > 0.0 && bound.is_finite()) {
        return Err(invalid("gamma1", format!("must be positive, got {bound}")));
    }
    Ok(EnergyBound { bound })
}

impl EnergyBound {
    pub fn bound(&self) -> f64 {
        self.bound
    }
}

impl ConvexFunction for EnergyBound {
    fn value(&self, x: &Tensor) -> Result<f64> {
        Ok(transforms::finite_diff(x)?.norm() - self.bound)
    }

    fn subgradient(&self, x: &Tensor) -> Result<Tensor> {
        let dx = transforms::finite_diff(x)?;
        let n = dx.norm();
        if n == 0.0 {
            // f sits at its minimum -bound there
            return Ok(Tensor::zeros(x.shape()));
        }
        Ok(transforms::finite_diff_adjoint(&dx)?.scale(1.0 / n))
    }
}

/// `f(x) = tv(x) - bound` with isotropic total variation on forward
/// differences, zero difference across the last row and column.
#[derive(Debug, Clone, Copy)]
pub struct TotalVariation {
    bound: f64,
}

pub fn tv_oracle(bound: f64) -> Result<TotalVariation> {
    if !(bound > 0.0 && bound.is_finite()) {
        return Err(invalid(
            "tv bound",
            format!("must be positive, got {bound}"),
        ));
    }
    Ok(TotalVariation { bound })
}

fn gradient(x: &Tensor) -> (Vec<f64>, Vec<f64>) {
    let (rows, cols) = x.shape();
    let d = x.as_slice();
    let mut gx = vec![0.0; rows * cols];
    let mut gy = vec![0.0; rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            let i = r * cols + c;
            if c + 1 < cols {
                gx[i] = d[i + 1] - d[i];
            }
            if r + 1 < rows {
                gy[i] = d[i + cols] - d[i];
            }
        }
    }
    (gx, gy)
}

/// Isotropic total variation of an image.
pub fn total_variation(x: &Tensor) -> f64 {
    let (gx, gy) = gradient(x);
    gx.iter().zip(&gy).map(|(a, b)| a.hypot(*b)).sum()
}

impl TotalVariation {
    pub fn bound(&self) -> f64 {
        self.bound
    }
}

impl ConvexFunction for TotalVariation {
    fn value(&self, x: &Tensor) -> Result<f64> {
        Ok(total_variation(x) - self.bound)
    }

    fn subgradient(&self, x: &Tensor) -> Result<Tensor> {
        let (rows, cols) = x.shape();
        let (mut gx, mut gy) = gradient(x);
        for (a, b) in gx.iter_mut().zip(gy.iter_mut()) {
            let m = a.hypot(*b);
            if m > 0.0 {
                *a /= m;
                *b /= m;
            } else {
                *a = 0.0;
                *b = 0.0;
            }
        }
        // adjoint of the forward-difference gradient, i.e. minus divergence
        let mut out = vec![0.0; rows * cols];
        for r in 0..rows {
            for c in 0..cols {
                let i = r * cols + c;
                if c + 1 < cols {
                    out[i] -= gx[i];
                    out[i + 1] += gx[i];
                }
                if r + 1 < rows {
                    out[i] -= gy[i];
                    out[i + cols] += gy[i];
                }
            }
        }
        Ok(Tensor::from_raw((rows, cols), out))
    }
}

/// Where certification draws its sample points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSpec {
    pub shape: (usize, usize),
    pub center: f64,
    pub scale: f64,
}

impl SampleSpec {
    pub fn unit(shape: (usize, usize)) -> Self {
        Self {
            shape,
            center: 0.0,
            scale: 1.0,
        }
    }

    fn draw(&self, rng: &mut Rng) -> Tensor {
        rng.gaussian_tensor(self.shape, self.scale)
            .map(|v| v + self.center)
    }

    /// Second point of a pair: independent, nearby, or very close to `x`.
    fn partner(&self, rng: &mut Rng, x: &Tensor) -> Tensor {
        match rng.below(3) {
            0 => self.draw(rng),
            1 => x.add(&rng.gaussian_tensor(self.shape, 0.1 * self.scale)),
            _ => x.add(&rng.gaussian_tensor(self.shape, 1e-3 * self.scale)),
        }
    }
}

/// Outcome of a numerical operator-inequality check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertReport {
    pub trials: usize,
    /// Largest violation, normalized by `max(1, ||x - y||^2)`.
    pub max_violation: f64,
    pub passed: bool,
}

pub const CERTIFY_TOLERANCE: f64 = 1e-9;

impl CertReport {
    fn from_worst(trials: usize, worst: f64) -> Self {
        Self {
            trials,
            max_violation: worst,
            passed: worst <= CERTIFY_TOLERANCE,
        }
    }
}

/// Samples pairs `(x, y)` and measures
/// `||Fx - Fy||^2 + ||(x - Fx) - (y - Fy)||^2 - ||x - y||^2`, which is
/// nonpositive for firmly nonexpansive `F`.
pub fn certify_firmly_nonexpansive(
    f: &dyn Fn(&Tensor) -> Result<Tensor>,
    rng: &mut Rng,
    trials: usize,
    sample: SampleSpec,
) -> Result<CertReport> {
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..trials.max(1) {
        let x = sample.draw(rng);
        let y = sample.partner(rng, &x);
        let (fx, fy) = (f(&x)?, f(&y)?);
        let d2 = x.distance(&y).powi(2);
        let img = fx.distance(&fy).powi(2);
        let res = x.sub(&fx).distance(&y.sub(&fy)).powi(2);
        worst = worst.max((img + res - d2) / d2.max(1.0));
    }
    Ok(CertReport::from_worst(trials.max(1), worst))
}

/// Checks `<y - Tx, x - Tx> <= 0` for sampled `x` against the supplied
/// fixed points `y` of `T`.
pub fn certify_firmly_quasinonexpansive(
    op: &FixedPointOp,
    rng: &mut Rng,
    trials: usize,
    sample: SampleSpec,
    fixed_points: &[Tensor],
) -> Result<CertReport> {
    if fixed_points.is_empty() {
        return Err(invalid("fixed_points", "need at least one witness"));
    }
    let mut worst = f64::NEG_INFINITY;
    for t in 0..trials.max(1) {
        let x = sample.draw(rng);
        let disp = op.displacement(&x)?;
        let tx = x.add(&disp);
        let y = &fixed_points[t % fixed_points.len()];
        let v = y.sub(&tx).dot(&disp.scale(-1.0));
        worst = worst.max(v / x.distance(y).powi(2).max(1.0));
    }
    Ok(CertReport::from_worst(trials.max(1), worst))
}
