//! Recovery of signals from nonlinear transformations under convex
//! constraints.
//!
//! Each observation `r_k = R_k x` is recast as a fixed-point equation of a
//! firmly nonexpansive operator, each prior constraint as a projector or
//! subgradient projector, and the resulting common fixed-point problem is
//! solved with an extrapolated block-iterative method
//! ([`solver::solve`]). Inconsistent problems are handled by
//! [`solver::solve_relaxed`].
//!
//! Displacement evaluations within an iteration run on a rayon pool when the
//! `parallel` feature is enabled and [`solver::SolverConfig::threads`] is
//! greater than one; results are always reduced in schedule order, so
//! traces do not depend on the thread count.

// `!(a < b)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
pub mod config;
pub mod error;
pub mod io;
pub mod operators;
pub mod problem;
pub mod scenarios;
pub mod solver;
pub mod tensor;
pub mod thresholds;
pub mod transforms;

pub use error::{Error, Result};
pub use operators::{FixedPointOp, OpKind};
pub use problem::Problem;
pub use solver::{solve, solve_relaxed, SolverConfig, Trace};
pub use tensor::{gaussian_unit_vector, Rng, Tensor};
