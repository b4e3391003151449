use std::path::PathBuf;

use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("diffusion fraction {0} is outside [0, 1]")]
    InvalidAlpha(f64),

    #[error("monitor entry {index} must be strictly positive, got {value}")]
    NonPositiveMonitor { index: usize, value: f64 },

    #[error(
        "matrix entry at row {row}, column {col} must be strictly positive and finite, got {value}"
    )]
    InvalidMatrixValue { row: usize, col: usize, value: f64 },

    #[error("entry {index} is negative ({value}) where nonnegative input is required")]
    NegativeEntry { index: usize, value: f64 },

    #[error("column {column} sums to {sum:.12}, expected 1 within {tol:e}")]
    NotColumnStochastic { column: usize, sum: f64, tol: f64 },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("dense routine is limited to n <= {cap}, got n = {n}")]
    DenseCapExceeded { n: usize, cap: usize },

    #[error("linear system is singular")]
    SingularSystem,

    #[error("power iteration did not converge within {max_iters} iterations (periodic or reducible input?)")]
    PowerIterationStalled { max_iters: u64 },

    #[error("conservation residual {residual:e} exceeds bound {bound:e} at step {step}")]
    InvariantViolated {
        step: u64,
        residual: f64,
        bound: f64,
    },

    #[error("computed diffusion fraction {alpha} exceeds 1 at step {step}; emulation state is inconsistent")]
    AlphaAboveOne { step: u64, alpha: f64 },

    #[error("unknown fixture '{0}'")]
    UnknownFixture(String),

    #[error("unknown method '{0}'")]
    UnknownMethod(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.to_string(),
            line,
            message: message.into(),
        }
    }
}
