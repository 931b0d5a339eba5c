use std::collections::BTreeMap;

use super::{displacements, IterationRecord, Pool, StopReason, Trace};
use crate::error::{invalid, Error, Result};
use crate::operators::{FixedPointOp, OpKind};
use crate::problem::Problem;
use crate::tensor::Tensor;

/// Settings for [`solve_relaxed`].
#[derive(Debug, Clone)]
pub struct RelaxedConfig {
    /// Weight per operator id; `None` means uniform.
    pub weights: Option<BTreeMap<usize, f64>>,
    /// Step size in `(0, 2)`.
    pub lambda: f64,
    pub residual_tol: f64,
    pub max_iters: usize,
    pub x0: Option<Tensor>,
    pub reference: Option<Tensor>,
    pub threads: usize,
}

impl Default for RelaxedConfig {
    fn default() -> Self {
        Self {
            weights: None,
            lambda: 1.0,
            residual_tol: super::DEFAULT_TOL,
            max_iters: super::DEFAULT_MAX_ITERS,
            x0: None,
            reference: None,
            threads: 1,
        }
    }
}

/// Finds a zero of
/// `Phi(x) = sum_j w_j (x - P_j x) + sum_k w_k (F_k x - p_k)`
/// with the damped iteration `x <- x - lambda Phi(x)`.
///
/// `Id - Phi` is an average of firmly nonexpansive maps, so for
/// `lambda in (0, 2)` the iteration converges whenever a zero exists. When
/// the sets do not intersect and there are no data operators, the zeros
/// are the minimizers of `sum_j w_j d_j^2`. All constraint operators must
/// be exact projectors.
pub fn solve_relaxed(problem: &Problem, config: &RelaxedConfig) -> Result<(Tensor, Trace)> {
    for (id, op) in problem.ops() {
        if op.kind() == OpKind::SubgradientProjector {
            return Err(Error::NotAProjector(*id));
        }
    }
    let ids: Vec<usize> = problem.ids().collect();
    if ids.is_empty() {
        return Err(invalid("problem", "has no operators"));
    }
    let weights: Vec<f64> = match &config.weights {
        None => vec![1.0 / ids.len() as f64; ids.len()],
        Some(map) => ids
            .iter()
            .map(|id| map.get(id).copied().ok_or(Error::UnknownId(*id)))
            .collect::<Result<_>>()?,
    };
    if let Some(w) = weights.iter().find(|&&w| !(w > 0.0 && w <= 1.0)) {
        return Err(Error::Weights {
            iteration: 0,
            reason: format!("weight {w} outside (0, 1]"),
        });
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::Weights {
            iteration: 0,
            reason: format!("weights sum to {sum}"),
        });
    }
    if !(config.lambda > 0.0 && config.lambda < 2.0) {
        return Err(invalid(
            "lambda",
            format!("must lie in (0, 2), got {}", config.lambda),
        ));
    }

    let ops: Vec<&FixedPointOp> = problem.ops().map(|(_, op)| op).collect();
    let mut x = config
        .x0
        .clone()
        .unwrap_or_else(|| Tensor::zeros(problem.shape()));
    if x.shape() != problem.shape() {
        return Err(Error::ShapeMismatch {
            left: x.shape(),
            right: problem.shape(),
        });
    }
    let pool = Pool::for_threads(config.threads);
    let mut records = Vec::new();
    let mut stop = StopReason::MaxIterations;

    for n in 0..config.max_iters {
        let ys = displacements(&ops, &x, pool.as_ref())?;
        // -Phi(x) = sum_i w_i y_i
        let mut step = Tensor::zeros(x.shape());
        let mut nu = 0.0;
        for (yi, &w) in ys.iter().zip(&weights) {
            nu += w * yi.norm_sq();
            step.axpy_in_place(w, yi);
        }
        let phi = step.norm();
        if !phi.is_finite() {
            return Err(Error::Diverged(n));
        }
        let mut record = IterationRecord {
            n,
            active: ids.clone(),
            nu,
            ynorm: phi,
            big_lambda: (phi > 0.0).then(|| nu / (phi * phi)),
            lambda: None,
            residual: phi,
            err_ref: config.reference.as_ref().map(|r| x.distance(r)),
        };
        if phi <= config.residual_tol {
            records.push(record);
            stop = StopReason::Converged;
            break;
        }
        x.axpy_in_place(config.lambda, &step);
        record.lambda = Some(config.lambda);
        records.push(record);
    }
    Ok((x, Trace { records, stop }))
}
