use thiserror::Error;

/// Errors produced anywhere in the recovery pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape {rows}x{cols} needs {expected} entries, got {got}")]
    ShapeData {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },
    #[error("non-finite entry at index {0}")]
    NonFinite(usize),
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("duplicate operator id {0}")]
    DuplicateId(usize),
    #[error("unknown operator id {0}")]
    UnknownId(usize),
    #[error("subgradient vanishes where the function is positive (f = {value}); constraint set is empty")]
    ZeroSubgradient { value: f64 },
    #[error("control does not activate id {id} within the window starting at iteration {window_start} (M = {m})")]
    ControlCoverage {
        id: usize,
        window_start: usize,
        m: usize,
    },
    #[error("empty active set at iteration {0}")]
    EmptyBlock(usize),
    #[error("weights at iteration {iteration} are invalid: {reason}")]
    Weights { iteration: usize, reason: String },
    #[error("relaxation {lambda} outside [{lo}, {hi}] at iteration {iteration}")]
    Relaxation {
        iteration: usize,
        lambda: f64,
        lo: f64,
        hi: f64,
    },
    #[error("averaged displacement vanished while individual displacements did not at iteration {0}; problem is inconsistent")]
    DegenerateStep(usize),
    #[error("non-finite iterate at iteration {0}")]
    Diverged(usize),
    #[error("relaxed solver requires exact projectors; operator {0} is a subgradient projector")]
    NotAProjector(usize),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
