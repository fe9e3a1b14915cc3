use thiserror::Error;

use crate::hermitian::TangentDirection;

/// Errors raised by the workbench.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (asymmetry {asymmetry:e} exceeds {tolerance:e})")]
    NotHermitian { asymmetry: f64, tolerance: f64 },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("convexity violated on triple ({t0}, {t1}, {t2}): excess {excess:e}")]
    ConvexityViolation {
        t0: f64,
        t1: f64,
        t2: f64,
        excess: f64,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("density is not positive at sample point {point}: {value:e}")]
    NonPositiveDensity { point: usize, value: f64 },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("invalid weight table: {0}")]
    InvalidTable(String),

    #[error("properness failed: direction {index} has slope {slope:e}")]
    NotProper {
        index: usize,
        slope: f64,
        direction: Box<TangentDirection>,
    },

    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
