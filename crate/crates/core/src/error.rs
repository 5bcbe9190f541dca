use thiserror::Error;

/// Errors raised by the interpolation and bound routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degenerate simplex (relative volume {0:e})")]
    DegenerateSimplex(f64),

    #[error("point lies outside the simplex (min barycentric coordinate {0:e})")]
    OutsideSimplex(f64),

    #[error("singular system (condition estimate {condition:e}): {context}")]
    Singular { condition: f64, context: String },

    #[error("centers are not unisolvent for polynomials of degree {degree} (rank {rank} < {required})")]
    NotUnisolvent {
        degree: usize,
        rank: usize,
        required: usize,
    },

    #[error("moment conditions violated (residual {residual:e}, tolerance {tolerance:e})")]
    MomentViolation { residual: f64, tolerance: f64 },

    #[error("quadratic form is negative ({0:e}); kernel sign is inconsistent")]
    NegativeQuadraticForm(f64),

    #[error("overflow evaluating {0}")]
    Overflow(String),

    #[error("quadrature did not converge (last relative change {0:e})")]
    QuadratureFailed(f64),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("self-check failed: {0}")]
    CheckFailed(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singular { .. }
                | Error::NegativeQuadraticForm(_)
                | Error::Overflow(_)
                | Error::CheckFailed(_)
                | Error::QuadratureFailed(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
