//! Reference implementations used as oracles by the integration tests.
//! Written against plain slices so they share no code with the library.

#![allow(dead_code)]

use recover_core::Tensor;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Orthogonal projection onto the span of an orthonormal basis.
pub fn project(basis: &[Tensor], x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; x.len()];
    for b in basis {
        let b = b.as_slice();
        let c = dot(b, x);
        for (o, bi) in out.iter_mut().zip(b) {
            *o += c * bi;
        }
    }
    out
}

/// Alternating projections for `x in V1, P_V2 x = r2`, started at zero:
/// `x <- P_V1(x - P_V2 x + r2)` until the update stalls at rounding level.
pub fn alternating_projections(
    v1: &[Tensor],
    v2: &[Tensor],
    r2: &[f64],
    max_iters: usize,
) -> Vec<f64> {
    let mut x = vec![0.0; r2.len()];
    let mut last_step = f64::INFINITY;
    for _ in 0..max_iters {
        let p2 = project(v2, &x);
        let shifted: Vec<f64> = x
            .iter()
            .zip(&p2)
            .zip(r2)
            .map(|((xi, pi), ri)| xi - pi + ri)
            .collect();
        let next = project(v1, &shifted);
        let step = dist(&next, &x);
        x = next;
        if step == 0.0 || (step < 1e-13 && step >= last_step) {
            break;
        }
        last_step = step;
    }
    x
}

pub fn sgn(xi: f64) -> f64 {
    if xi > 0.0 {
        1.0
    } else if xi < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Thresholded square-root quantizer: zero on `[-g, g]`, else `sgn(xi) sqrt(xi^2 - g^2)`.
pub fn q_oracle(g: f64, xi: f64) -> f64 {
    if xi.abs() <= g {
        0.0
    } else {
        sgn(xi) * (xi * xi - g * g).sqrt()
    }
}

pub fn soft_oracle(g: f64, xi: f64) -> f64 {
    sgn(xi) * (xi.abs() - g).max(0.0)
}

pub fn hard_oracle(g: f64, xi: f64) -> f64 {
    if xi.abs() > g {
        xi
    } else {
        0.0
    }
}

pub fn clip_oracle(g: f64, xi: f64) -> f64 {
    xi.max(-g).min(g)
}

/// `(2 / pi) atan(g xi)`.
pub fn arctan_oracle(g: f64, xi: f64) -> f64 {
    2.0 / std::f64::consts::PI * (g * xi).atan()
}

/// Keeps the `count` lowest frequencies of a real signal through a direct
/// O(N^2) DFT.
pub fn bandlimit_oracle(x: &[f64], count: usize) -> Vec<f64> {
    let n = x.len();
    let half = (count - 1) / 2;
    let keep = |k: usize| k <= half || k >= n - half;
    let tau = 2.0 * std::f64::consts::PI / n as f64;
    let spec: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            if !keep(k) {
                return (0.0, 0.0);
            }
            x.iter().enumerate().fold((0.0, 0.0), |(re, im), (t, v)| {
                let a = tau * (k * t % n) as f64;
                (re + v * a.cos(), im - v * a.sin())
            })
        })
        .collect();
    (0..n)
        .map(|t| {
            spec.iter()
                .enumerate()
                .map(|(k, (re, im))| {
                    let a = tau * (k * t % n) as f64;
                    re * a.cos() - im * a.sin()
                })
                .sum::<f64>()
                / n as f64
        })
        .collect()
}
