//! Extrapolated block-iterative fixed-point solver and the relaxed solver
//! for inconsistent problems.
//!
//! At iteration `n` each active operator `i` contributes its displacement
//! `y_i = T_i x_n - x_n`. With `nu = sum omega_i ||y_i||^2` and
//! `y = sum omega_i y_i`, the step is `x_{n+1} = x_n + lambda_n y` where
//! `lambda_n` lies in `[eps, (2 - eps) Lambda_n]` and
//! `Lambda_n = nu / ||y||^2 >= 1`.

mod control;
mod relaxation;
mod relaxed;
mod trace;

use std::collections::HashMap;

pub use control::{
    check_weights, validate_control, ControlMode, ControlPolicy, WeightFn, WeightPolicy,
};
pub use relaxation::{emopsp_lambda, RelaxationPolicy};
pub use relaxed::{solve_relaxed, RelaxedConfig};
pub use trace::{fmt_f64, IterationRecord, StopReason, Trace, TRACE_HEADER};

use crate::error::{invalid, Error, Result};
use crate::operators::FixedPointOp;
use crate::problem::Problem;
use crate::tensor::Tensor;

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITERS: usize = 100_000;

#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Lower bound on weights and relaxations; `None` picks
    /// `min(1e-2, 1 / (2 card(J u K)))`.
    pub epsilon: Option<f64>,
    pub weights: WeightPolicy,
    pub control: ControlPolicy,
    pub relaxation: RelaxationPolicy,
    /// Stop once every displacement over one control period is this small.
    pub residual_tol: f64,
    pub max_iters: usize,
    /// Starting point; zero when `None`.
    pub x0: Option<Tensor>,
    /// Optional ground truth; fills `err_ref` in the trace.
    pub reference: Option<Tensor>,
    /// Worker threads for displacement evaluation; 0 or 1 runs sequentially.
    /// Results are reduced in schedule order either way.
    pub threads: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            epsilon: None,
            weights: WeightPolicy::Uniform,
            control: ControlPolicy::full_parallel(),
            relaxation: RelaxationPolicy::Emopsp,
            residual_tol: DEFAULT_TOL,
            max_iters: DEFAULT_MAX_ITERS,
            x0: None,
            reference: None,
            threads: 1,
        }
    }
}

pub fn default_epsilon(card: usize) -> f64 {
    (1e-2f64).min(1.0 / (2.0 * card as f64))
}

impl SolverConfig {
    pub fn epsilon_for(&self, card: usize) -> Result<f64> {
        let eps = self.epsilon.unwrap_or_else(|| default_epsilon(card));
        if !(eps > 0.0 && eps < 1.0 / card as f64) {
            return Err(invalid(
                "epsilon",
                format!("must lie in (0, 1/{card}), got {eps}"),
            ));
        }
        Ok(eps)
    }
}

/// Evaluates displacements of `ops` at `x`, in order.
pub(crate) fn displacements(
    ops: &[&FixedPointOp],
    x: &Tensor,
    pool: Option<&Pool>,
) -> Result<Vec<Tensor>> {
    match pool {
        #[cfg(feature = "parallel")]
        Some(pool) => {
            use rayon::prelude::*;
            pool.0
                .install(|| ops.par_iter().map(|op| op.displacement(x)).collect())
        }
        _ => ops.iter().map(|op| op.displacement(x)).collect(),
    }
}

/// Worker pool for intra-iteration parallelism.
pub(crate) struct Pool(#[cfg(feature = "parallel")] rayon::ThreadPool);

impl Pool {
    pub(crate) fn for_threads(threads: usize) -> Option<Pool> {
        #[cfg(feature = "parallel")]
        if threads > 1 {
            return rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .ok()
                .map(Pool);
        }
        let _ = threads;
        None
    }
}

/// Runs the extrapolated block-iterative algorithm and returns the final
/// iterate together with its trace.
pub fn solve(problem: &Problem, config: &SolverConfig) -> Result<(Tensor, Trace)> {
    let all_ids: Vec<usize> = problem.ids().collect();
    if all_ids.is_empty() {
        return Err(invalid("problem", "has no operators"));
    }
    let eps = config.epsilon_for(all_ids.len())?;
    validate_control(&config.control, &problem.id_set())?;
    if !(config.residual_tol >= 0.0) {
        return Err(invalid("residual_tol", "must be nonnegative"));
    }
    let index: HashMap<usize, &FixedPointOp> = problem.ops().map(|(id, op)| (*id, op)).collect();
    let mut x = match &config.x0 {
        Some(x0) => x0.clone(),
        None => Tensor::zeros(problem.shape()),
    };
    if x.shape() != problem.shape() {
        return Err(Error::ShapeMismatch {
            left: x.shape(),
            right: problem.shape(),
        });
    }
    if let Some(r) = &config.reference {
        x.ensure_shape(r)?;
    }
    let pool = Pool::for_threads(config.threads);
    let period = config.control.period();
    let mut records = Vec::new();
    let mut below = 0usize;
    let mut stop = StopReason::MaxIterations;

    for n in 0..config.max_iters {
        let active = config.control.active_set(n, &all_ids);
        let weights = config.weights.weights(n, &active)?;
        check_weights(n, &weights, active.len(), eps)?;
        let ops: Vec<&FixedPointOp> = active.iter().map(|id| index[id]).collect();
        let ys = displacements(&ops, &x, pool.as_ref())?;

        let mut nu = 0.0;
        let mut residual = 0.0f64;
        let mut y = Tensor::zeros(x.shape());
        for (yi, &w) in ys.iter().zip(&weights) {
            let norm = yi.norm();
            residual = residual.max(norm);
            nu += w * norm * norm;
            y.axpy_in_place(w, yi);
        }
        if !nu.is_finite() {
            return Err(Error::Diverged(n));
        }
        let err_ref = config.reference.as_ref().map(|r| x.distance(r));
        let ynorm = y.norm();
        let mut record = IterationRecord {
            n,
            active,
            nu,
            ynorm,
            big_lambda: None,
            lambda: None,
            residual,
            err_ref,
        };

        below = if residual <= config.residual_tol {
            below + 1
        } else {
            0
        };
        let done = below >= period;

        if nu > 0.0 {
            let y2 = ynorm * ynorm;
            if y2 == 0.0 {
                return Err(Error::DegenerateStep(n));
            }
            let big_lambda = nu / y2;
            record.big_lambda = Some(big_lambda);
            if !done {
                let lambda = config.relaxation.lambda(n, big_lambda);
                let hi = (2.0 - eps) * big_lambda;
                if !(lambda >= eps && lambda <= hi) {
                    return Err(Error::Relaxation {
                        iteration: n,
                        lambda,
                        lo: eps,
                        hi,
                    });
                }
                x.axpy_in_place(lambda, &y);
                if !x.all_finite() {
                    return Err(Error::Diverged(n));
                }
                record.lambda = Some(lambda);
            }
        }
        records.push(record);
        if done {
            stop = StopReason::Converged;
            break;
        }
    }
    Ok((x, Trace { records, stop }))
}
