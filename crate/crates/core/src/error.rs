//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Cholesky factorization hit a non-positive pivot.
    #[error("matrix is not positive definite (pivot {pivot:.3e} at index {index})")]
    NotSpd { index: usize, pivot: f64 },

    /// A matrix handed to an SPD routine is not symmetric within tolerance.
    #[error("matrix is not symmetric: max |M - M^T| = {deviation:.3e} exceeds tolerance")]
    NotSymmetric { deviation: f64 },

    /// An iterative decomposition exhausted its sweep budget.
    #[error("{what} did not converge within {sweeps} sweeps")]
    ConvergenceFailure { what: &'static str, sweeps: usize },

    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    /// Membership column sums deviate from 1 beyond tolerance.
    #[error("membership is not doubly stochastic: marginal deviation {deviation:.3e}")]
    NotDoublyStochastic { deviation: f64 },

    /// A backward pass received data that does not match its forward trace.
    #[error("gradient does not match the recorded forward trace: {context}")]
    TraceMismatch { context: String },

    #[error("shape mismatch: {context}")]
    ShapeMismatch { context: String },

    #[error("label vectors have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    /// Spectral clustering received an affinity with a (near-)zero degree.
    #[error("degenerate affinity: node {index} has degree {degree:.3e}")]
    DegenerateAffinity { index: usize, degree: f64 },

    /// Numerical rank of an all-zero matrix is undefined.
    #[error("numerical rank is undefined for the zero matrix")]
    ZeroMatrix,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed file {path}: {reason}")]
    Format { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn dim(context: impl Into<String>) -> Self {
        Error::DimensionMismatch { context: context.into() }
    }

    pub fn shape(context: impl Into<String>) -> Self {
        Error::ShapeMismatch { context: context.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
