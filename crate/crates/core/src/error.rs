use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("singular point: {0}")]
    SingularPoint(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error at `{path}`: {message}")]
    Validation { path: String, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("infinite input: {0}")]
    InfiniteInput(&'static str),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("condition failed: {0}")]
    ConditionFailed(String),

    #[error("no root: {0}")]
    NoRoot(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("singular Jacobian: {0}")]
    JacobianSingular(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn validation(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Validation {
        path: path.into(),
        message: message.into(),
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
