use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least 2, got {0}")]
    InvalidDimension(usize),

    #[error("malformed polynomial document: {0}")]
    Parse(String),

    #[error("polynomial is not {order}-harmonic")]
    NotPolyharmonic { order: u32 },

    #[error("polynomial is not homogeneous")]
    NonHomogeneous,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: f64 },

    #[error("series did not converge after {iterations} terms")]
    NonConvergence { iterations: usize },

    #[error("{0} lies outside the characterized range")]
    OutOfRange(String),

    #[error("point outside the admissible domain: {0}")]
    Domain(String),

    #[error("evaluation failed: {0}")]
    Evaluation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
