//! Forward-model building blocks: unitary DFT, spectral bandlimiting, finite
//! differences, clipping, arctan distortion, orthonormal Haar wavelets,
//! periodic Gaussian blur and block averaging.

use std::cell::RefCell;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{invalid, Result};
use crate::tensor::Tensor;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Complex coefficients held as paired real tensors of equal shape.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub re: Tensor,
    pub im: Tensor,
}

impl Spectrum {
    pub fn new(re: Tensor, im: Tensor) -> Result<Self> {
        re.ensure_shape(&im)?;
        Ok(Self { re, im })
    }

    pub fn shape(&self) -> (usize, usize) {
        self.re.shape()
    }

    pub fn norm(&self) -> f64 {
        (self.re.norm_sq() + self.im.norm_sq()).sqrt()
    }

    pub(crate) fn from_complex(shape: (usize, usize), buf: &[Complex<f64>]) -> Self {
        Self {
            re: Tensor::from_raw(shape, buf.iter().map(|c| c.re).collect()),
            im: Tensor::from_raw(shape, buf.iter().map(|c| c.im).collect()),
        }
    }

    pub(crate) fn to_complex(&self) -> Vec<Complex<f64>> {
        self.re
            .as_slice()
            .iter()
            .zip(self.im.as_slice())
            .map(|(&re, &im)| Complex::new(re, im))
            .collect()
    }

    /// Largest deviation from `X[k] = conj(X[-k mod N])` over all bins.
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        let (rows, cols) = self.shape();
        let mut worst = 0.0f64;
        for r in 0..rows {
            for c in 0..cols {
                let (pr, pc) = ((rows - r) % rows, (cols - c) % cols);
                let dre = self.re.get(r, c) - self.re.get(pr, pc);
                let dim = self.im.get(r, c) + self.im.get(pr, pc);
                worst = worst.max(dre.abs()).max(dim.abs());
            }
        }
        worst
    }
}

/// In-place unitary DFT over both axes of a row-major buffer.
pub(crate) fn fft2_in_place(shape: (usize, usize), buf: &mut [Complex<f64>], inverse: bool) {
    let (rows, cols) = shape;
    PLANNER.with(|planner| {
        let mut planner = planner.borrow_mut();
        if cols > 1 {
            let fft = if inverse {
                planner.plan_fft_inverse(cols)
            } else {
                planner.plan_fft_forward(cols)
            };
            // rows are contiguous, so the whole buffer is a batch of row FFTs
            fft.process(buf);
        }
        if rows > 1 {
            let fft = if inverse {
                planner.plan_fft_inverse(rows)
            } else {
                planner.plan_fft_forward(rows)
            };
            if cols == 1 {
                fft.process(buf);
            } else {
                let mut column = vec![Complex::new(0.0, 0.0); rows];
                for c in 0..cols {
                    for r in 0..rows {
                        column[r] = buf[r * cols + c];
                    }
                    fft.process(&mut column);
                    for r in 0..rows {
                        buf[r * cols + c] = column[r];
                    }
                }
            }
        }
    });
    let scale = 1.0 / ((rows * cols) as f64).sqrt();
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

pub(crate) fn real_to_complex(x: &Tensor) -> Vec<Complex<f64>> {
    x.as_slice().iter().map(|&v| Complex::new(v, 0.0)).collect()
}

pub(crate) fn complex_real_part(shape: (usize, usize), buf: &[Complex<f64>]) -> Tensor {
    Tensor::from_raw(shape, buf.iter().map(|c| c.re).collect())
}

/// Unitary DFT (1/sqrt(N) per axis) of a signal or image.
pub fn dft(x: &Tensor) -> Spectrum {
    let mut buf = real_to_complex(x);
    fft2_in_place(x.shape(), &mut buf, false);
    Spectrum::from_complex(x.shape(), &buf)
}

/// Inverse of [`dft`], keeping the real part.
pub fn idft(s: &Spectrum) -> Result<Tensor> {
    s.re.ensure_shape(&s.im)?;
    let mut buf = s.to_complex();
    fft2_in_place(s.shape(), &mut buf, true);
    Ok(complex_real_part(s.shape(), &buf))
}

/// Whether DFT bin `k` of a length-`n` signal survives a band of `count`
/// coefficients (DC plus `(count - 1) / 2` conjugate pairs).
pub(crate) fn in_band(k: usize, n: usize, count: usize) -> bool {
    count >= n || k.min(n - k) <= (count - 1) / 2
}

/// Keeps the `count` lowest-frequency DFT coefficients of a 1D signal.
///
/// `count` must be odd so that conjugate pairs stay together, except that
/// `count == N` (full band) is always accepted.
pub fn bandlimit(x: &Tensor, count: usize) -> Result<Tensor> {
    if !x.is_signal() {
        return Err(invalid("x", "bandlimit expects a 1D signal"));
    }
    let n = x.len();
    if count == 0 || count > n {
        return Err(invalid(
            "count",
            format!("must lie in 1..={n}, got {count}"),
        ));
    }
    if count == n {
        return Ok(x.clone());
    }
    if count.is_multiple_of(2) {
        return Err(invalid(
            "count",
            format!("must be odd (DC plus symmetric pairs), got {count}"),
        ));
    }
    let mut buf = real_to_complex(x);
    fft2_in_place(x.shape(), &mut buf, false);
    for (k, v) in buf.iter_mut().enumerate() {
        if !in_band(k, n, count) {
            *v = Complex::new(0.0, 0.0);
        }
    }
    fft2_in_place(x.shape(), &mut buf, true);
    Ok(complex_real_part(x.shape(), &buf))
}

/// `(x[i+1] - x[i])` for `i in 0..N-1`.
pub fn finite_diff(x: &Tensor) -> Result<Tensor> {
    if !x.is_signal() || x.len() < 2 {
        return Err(invalid(
            "x",
            "finite differences need a 1D signal of length >= 2",
        ));
    }
    let d: Vec<f64> = x.as_slice().windows(2).map(|w| w[1] - w[0]).collect();
    Ok(Tensor::from_raw((d.len(), 1), d))
}

/// Transpose of [`finite_diff`]: maps length N-1 to length N.
pub fn finite_diff_adjoint(u: &Tensor) -> Result<Tensor> {
    if !u.is_signal() || u.is_empty() {
        return Err(invalid("u", "adjoint needs a 1D signal of length >= 1"));
    }
    let u = u.as_slice();
    let n = u.len() + 1;
    let out = (0..n)
        .map(|i| {
            let prev = if i > 0 { u[i - 1] } else { 0.0 };
            let next = if i < n - 1 { u[i] } else { 0.0 };
            prev - next
        })
        .collect();
    Ok(Tensor::from_raw((n, 1), out))
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(
            name,
            format!("must be positive and finite, got {v}"),
        ))
    }
}

/// Componentwise projection onto `[-gamma, gamma]`.
pub fn clip(x: &Tensor, gamma: f64) -> Result<Tensor> {
    positive("gamma", gamma)?;
    Ok(x.map(|v| v.clamp(-gamma, gamma)))
}

/// Componentwise `(2/pi) atan(gamma * x)`.
pub fn arctan_distort(x: &Tensor, gamma: f64) -> Result<Tensor> {
    positive("gamma", gamma)?;
    Ok(x.map(|v| std::f64::consts::FRAC_2_PI * (gamma * v).atan()))
}

fn check_haar_shape(x: &Tensor) -> Result<usize> {
    let (rows, cols) = x.shape();
    if rows != cols || !rows.is_power_of_two() {
        return Err(invalid(
            "x",
            format!(
                "Haar transform needs a square image with power-of-two side, got {rows}x{cols}"
            ),
        ));
    }
    Ok(rows)
}

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn haar_step(v: &mut [f64], scratch: &mut [f64]) {
    let half = v.len() / 2;
    for i in 0..half {
        let (a, b) = (v[2 * i], v[2 * i + 1]);
        scratch[i] = (a + b) * SQRT_HALF;
        scratch[half + i] = (a - b) * SQRT_HALF;
    }
    v.copy_from_slice(&scratch[..v.len()]);
}

fn haar_unstep(v: &mut [f64], scratch: &mut [f64]) {
    let half = v.len() / 2;
    for i in 0..half {
        let (s, d) = (v[i], v[half + i]);
        scratch[2 * i] = (s + d) * SQRT_HALF;
        scratch[2 * i + 1] = (s - d) * SQRT_HALF;
    }
    v.copy_from_slice(&scratch[..v.len()]);
}

/// Full-depth orthonormal 2D Haar transform (Mallat layout: the coarsest
/// scaling coefficient ends up at `(0, 0)`).
pub fn haar2d(x: &Tensor) -> Result<Tensor> {
    let n = check_haar_shape(x)?;
    let mut data = x.as_slice().to_vec();
    let mut line = vec![0.0; n];
    let mut scratch = vec![0.0; n];
    let mut size = n;
    while size > 1 {
        for r in 0..size {
            haar_step(&mut data[r * n..r * n + size], &mut scratch);
        }
        for c in 0..size {
            for r in 0..size {
                line[r] = data[r * n + c];
            }
            haar_step(&mut line[..size], &mut scratch);
            for r in 0..size {
                data[r * n + c] = line[r];
            }
        }
        size /= 2;
    }
    Ok(Tensor::from_raw((n, n), data))
}

/// Inverse of [`haar2d`].
pub fn haar2d_inv(w: &Tensor) -> Result<Tensor> {
    let n = check_haar_shape(w)?;
    let mut data = w.as_slice().to_vec();
    let mut line = vec![0.0; n];
    let mut scratch = vec![0.0; n];
    let mut size = 2;
    while size <= n {
        for c in 0..size {
            for r in 0..size {
                line[r] = data[r * n + c];
            }
            haar_unstep(&mut line[..size], &mut scratch);
            for r in 0..size {
                data[r * n + c] = line[r];
            }
        }
        for r in 0..size {
            haar_unstep(&mut data[r * n..r * n + size], &mut scratch);
        }
        size *= 2;
    }
    Ok(Tensor::from_raw((n, n), data))
}

/// Normalized, truncated Gaussian kernel for periodic convolution.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianKernel {
    size: usize,
    weights: Vec<f64>,
}

impl Default for GaussianKernel {
    /// 5x5 taps, unit variance.
    fn default() -> Self {
        Self::new(5, 1.0).expect("valid default kernel")
    }
}

impl GaussianKernel {
    pub fn new(size: usize, variance: f64) -> Result<Self> {
        if size.is_multiple_of(2) {
            return Err(invalid("blur_size", format!("must be odd, got {size}")));
        }
        positive("variance", variance)?;
        let h = (size / 2) as i64;
        let mut weights = Vec::with_capacity(size * size);
        for i in -h..=h {
            for j in -h..=h {
                weights.push((-((i * i + j * j) as f64) / (2.0 * variance)).exp());
            }
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        Ok(Self { size, weights })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Circular convolution. The kernel is symmetric, so this operator is
    /// self-adjoint.
    pub fn apply(&self, x: &Tensor) -> Tensor {
        let (rows, cols) = x.shape();
        let h = (self.size / 2) as isize;
        let src = x.as_slice();
        let mut out = vec![0.0; rows * cols];
        // offsets reduced mod the image size once per tap
        let row_off: Vec<usize> = (-h..=h)
            .map(|d| d.rem_euclid(rows as isize) as usize)
            .collect();
        let col_off: Vec<usize> = (-h..=h)
            .map(|d| d.rem_euclid(cols as isize) as usize)
            .collect();
        for r in 0..rows {
            for (ki, &ro) in row_off.iter().enumerate() {
                let sr = (r + ro) % rows;
                let src_row = &src[sr * cols..(sr + 1) * cols];
                let krow = &self.weights[ki * self.size..(ki + 1) * self.size];
                let dst = &mut out[r * cols..(r + 1) * cols];
                for (&w, &co) in krow.iter().zip(&col_off) {
                    for (c, d) in dst.iter_mut().enumerate() {
                        *d += w * src_row[(c + co) % cols];
                    }
                }
            }
        }
        Tensor::from_raw((rows, cols), out)
    }
}

/// Periodic convolution with the 5x5 unit-variance Gaussian kernel.
pub fn gaussian_blur(x: &Tensor) -> Tensor {
    GaussianKernel::default().apply(x)
}

fn check_blocks(rows: usize, cols: usize, b: usize) -> Result<()> {
    if b == 0 || !rows.is_multiple_of(b) || !cols.is_multiple_of(b) {
        return Err(invalid(
            "block",
            format!("{b} must divide both image sides {rows}x{cols}"),
        ));
    }
    Ok(())
}

/// Mean of each disjoint `b x b` block.
pub fn block_average(x: &Tensor, b: usize) -> Result<Tensor> {
    let (rows, cols) = x.shape();
    check_blocks(rows, cols, b)?;
    let (br, bc) = (rows / b, cols / b);
    let mut out = vec![0.0; br * bc];
    for r in 0..rows {
        for c in 0..cols {
            out[(r / b) * bc + c / b] += x.get(r, c);
        }
    }
    let inv = 1.0 / (b * b) as f64;
    out.iter_mut().for_each(|v| *v *= inv);
    Ok(Tensor::from_raw((br, bc), out))
}

/// Repeats each pixel over a `b x b` block.
pub fn block_replicate(y: &Tensor, b: usize) -> Result<Tensor> {
    if b == 0 {
        return Err(invalid("block", "must be positive"));
    }
    let (rows, cols) = (y.rows() * b, y.cols() * b);
    let data = (0..rows * cols)
        .map(|i| y.get(i / cols / b, (i % cols) / b))
        .collect();
    Ok(Tensor::from_raw((rows, cols), data))
}

/// Orthogonal projection onto block-constant images.
pub fn block_project(x: &Tensor, b: usize) -> Result<Tensor> {
    block_replicate(&block_average(x, b)?, b)
}
