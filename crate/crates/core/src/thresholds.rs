//! Scalar thresholding rules and the identities linking them.
//!
//! Every rule maps `|xi| <= level` to zero, so the boundary belongs to the
//! dead zone.

use crate::error::{invalid, Result};
use crate::tensor::Tensor;

/// Sign with `sign(0) = 0`.
pub fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// A validated (positive, finite) threshold level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level(f64);

impl Level {
    pub fn new(level: f64) -> Result<Self> {
        if level > 0.0 && level.is_finite() {
            Ok(Self(level))
        } else {
            Err(invalid(
                "level",
                format!("must be positive and finite, got {level}"),
            ))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `sign(xi) sqrt(xi^2 - g^2)` outside the dead zone.
    pub fn q(self, xi: f64) -> f64 {
        let g = self.0;
        if xi.abs() > g {
            sign(xi) * (xi * xi - g * g).sqrt()
        } else {
            0.0
        }
    }

    /// `sign(xi) max(|xi| - g, 0)`.
    pub fn soft(self, xi: f64) -> f64 {
        if xi.abs() > self.0 {
            sign(xi) * (xi.abs() - self.0)
        } else {
            0.0
        }
    }

    /// Soft thresholding written through `q`:
    /// `sign(q) (sqrt(q^2 + g^2) - g)` with `q = self.q(xi)`.
    pub fn soft_via_q(self, xi: f64) -> f64 {
        self.lift_q(self.q(xi))
    }

    /// `eta -> sign(eta) (sqrt(eta^2 + g^2) - g)`; maps a `q` output back to
    /// the soft-thresholded value of the same input.
    pub fn lift_q(self, eta: f64) -> f64 {
        let g = self.0;
        sign(eta) * ((eta * eta + g * g).sqrt() - g)
    }

    pub fn hard(self, xi: f64) -> f64 {
        if xi.abs() > self.0 {
            xi
        } else {
            0.0
        }
    }

    /// Offset turning a hard-thresholded value into the soft-thresholded
    /// value of the same input.
    pub fn hard_to_soft_correction(self, eta: f64) -> f64 {
        let r = self.0;
        if eta > r {
            -r
        } else if eta < -r {
            r
        } else {
            0.0
        }
    }
}

pub fn q_threshold(xi: f64, gamma: f64) -> Result<f64> {
    Ok(Level::new(gamma)?.q(xi))
}

pub fn soft_threshold(xi: f64, gamma: f64) -> Result<f64> {
    Ok(Level::new(gamma)?.soft(xi))
}

pub fn hard_threshold(xi: f64, rho: f64) -> Result<f64> {
    Ok(Level::new(rho)?.hard(xi))
}

/// Total in `eta`; a non-positive `rho` is treated as zero offset.
pub fn hard_to_soft_correction(eta: f64, rho: f64) -> f64 {
    match Level::new(rho) {
        Ok(l) => l.hard_to_soft_correction(eta),
        Err(_) => 0.0,
    }
}

/// Applies a scalar rule to every entry, preserving shape.
pub fn lift(x: &Tensor, f: impl Fn(f64) -> f64) -> Tensor {
    x.map(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn q_values() {
        assert_eq!(q_threshold(0.03, 0.05).unwrap(), 0.0);
        assert_eq!(q_threshold(-0.05, 0.05).unwrap(), 0.0);
        assert_eq!(q_threshold(0.05, 0.05).unwrap(), 0.0);
        // 5-12-13 triple
        assert!((q_threshold(0.13, 0.05).unwrap() - 0.12).abs() < 1e-15);
        assert!((q_threshold(-0.13, 0.05).unwrap() + 0.12).abs() < 1e-15);
        assert!(q_threshold(1.0, 0.0).is_err());
        assert!(q_threshold(1.0, -0.1).is_err());
    }

    #[test]
    fn soft_values() {
        assert_eq!(soft_threshold(0.7, 0.7).unwrap(), 0.0);
        assert!((soft_threshold(2.0, 0.7).unwrap() - 1.3).abs() < 1e-15);
        assert!((soft_threshold(-2.0, 0.7).unwrap() + 1.3).abs() < 1e-15);
        assert!(soft_threshold(1.0, 0.0).is_err());
    }

    #[test]
    fn hard_values() {
        assert_eq!(hard_threshold(300.0, 325.0).unwrap(), 0.0);
        assert_eq!(hard_threshold(400.0, 325.0).unwrap(), 400.0);
        assert_eq!(hard_threshold(325.0, 325.0).unwrap(), 0.0);
        assert_eq!(hard_threshold(-325.0, 325.0).unwrap(), 0.0);
        assert!(hard_threshold(1.0, 0.0).is_err());
    }

    #[test]
    fn corrections() {
        assert_eq!(hard_to_soft_correction(0.0, 325.0), 0.0);
        assert_eq!(hard_to_soft_correction(400.0, 325.0), -325.0);
        assert_eq!(hard_to_soft_correction(-400.0, 325.0), 325.0);
    }

    #[test]
    fn soft_through_q_on_grid() {
        let l = Level::new(0.7).unwrap();
        let mut worst = 0.0f64;
        for i in 0..10_000 {
            let xi = -3.0 + 6.0 * i as f64 / 9_999.0;
            worst = worst.max((l.soft(xi) - l.soft_via_q(xi)).abs());
        }
        assert!(worst <= 1e-12, "{worst}");
    }

    #[test]
    fn soft_is_hard_plus_correction() {
        let l = Level::new(325.0).unwrap();
        let mut rng = crate::tensor::Rng::new(1);
        for _ in 0..10_000 {
            let xi = rng.uniform_in(-1000.0, 1000.0);
            let h = l.hard(xi);
            assert_eq!(l.soft(xi), h + l.hard_to_soft_correction(h));
        }
    }

    #[test]
    fn lifting_preserves_shape() {
        let x = Tensor::new((2, 2), vec![-2.0, 0.1, 0.5, 3.0]).unwrap();
        let l = Level::new(0.5).unwrap();
        let y = lift(&x, |v| l.soft(v));
        assert_eq!(y.shape(), (2, 2));
        assert_eq!(y.as_slice(), &[-1.5, 0.0, 0.0, 2.5]);
    }

    proptest! {
        #[test]
        fn soft_is_firmly_nonexpansive(a in -5.0f64..5.0, b in -5.0f64..5.0, g in 0.01f64..2.0) {
            let l = Level::new(g).unwrap();
            let (ta, tb) = (l.soft(a), l.soft(b));
            let slack = (a - b).powi(2) - (ta - tb).powi(2) - ((a - ta) - (b - tb)).powi(2);
            prop_assert!(slack >= -1e-12);
        }

        #[test]
        fn q_is_monotone_and_shrinking(a in -5.0f64..5.0, b in -5.0f64..5.0, g in 0.01f64..2.0) {
            let l = Level::new(g).unwrap();
            prop_assert!(l.q(a).abs() <= a.abs());
            if a <= b {
                prop_assert!(l.q(a) <= l.q(b));
            }
        }
    }
}
