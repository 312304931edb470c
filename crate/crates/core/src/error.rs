use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("{function}: argument out of domain ({detail})")]
    Domain {
        function: &'static str,
        detail: String,
    },

    /// An iterative method ran out of iterations.
    #[error("{function}: no convergence after {iterations} iterations")]
    NoConvergence {
        function: &'static str,
        iterations: usize,
    },

    /// The result is too large to represent as an `f64`.
    #[error("{function}: result overflows f64 (argument {argument})")]
    Overflow {
        function: &'static str,
        argument: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The clamped correlation matrix no longer reproduces the input.
    #[error("correlation matrix is not positive semidefinite (clamped mass {clamped:.3e})")]
    NotPsd { clamped: f64 },

    /// Moment matching produced zero variance (or a nonpositive one).
    #[error("degenerate moment fit: mean {mean:.6e}, variance {variance:.6e}")]
    DegenerateFit { mean: f64, variance: f64 },

    #[error("k = {k} is out of range for {n} candidates")]
    KOutOfRange { k: usize, n: usize },

    #[error("invalid sweep grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}: {message}")]
    Config { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        function,
        detail: detail.into(),
    }
}
