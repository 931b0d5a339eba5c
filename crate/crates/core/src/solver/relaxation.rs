use std::fmt;
use std::sync::Arc;

/// Relaxation rule recommended for extrapolated parallel projections:
/// a half step every third iteration, nearly maximal steps otherwise.
pub fn emopsp_lambda(n: usize, big_lambda: f64) -> f64 {
    if n.is_multiple_of(3) {
        big_lambda / 2.0
    } else {
        1.99 * big_lambda
    }
}

/// Produces `lambda_n` from the iteration index and the extrapolation
/// parameter `Lambda_n`.
#[derive(Clone, Default)]
pub enum RelaxationPolicy {
    #[default]
    Emopsp,
    Constant(f64),
    Custom(Arc<dyn Fn(usize, f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for RelaxationPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelaxationPolicy::Emopsp => write!(f, "Emopsp"),
            RelaxationPolicy::Constant(l) => write!(f, "Constant({l})"),
            RelaxationPolicy::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl fmt::Display for RelaxationPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelaxationPolicy::Emopsp => write!(f, "emopsp"),
            RelaxationPolicy::Constant(l) => write!(f, "constant({l})"),
            RelaxationPolicy::Custom(_) => write!(f, "custom"),
        }
    }
}

impl RelaxationPolicy {
    pub fn lambda(&self, n: usize, big_lambda: f64) -> f64 {
        match self {
            RelaxationPolicy::Emopsp => emopsp_lambda(n, big_lambda),
            RelaxationPolicy::Constant(l) => *l,
            RelaxationPolicy::Custom(f) => f(n, big_lambda),
        }
    }
}
