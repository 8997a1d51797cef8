use thiserror::Error;

/// Errors raised by the numerical pipeline.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate state: squared norm {norm_sq:.3e} is below the normalization threshold")]
    DegenerateState { norm_sq: f64 },

    #[error("detuning ω_{index} = {value} must be positive")]
    NonPositiveDetuning { index: usize, value: f64 },

    #[error("generator is time dependent: detunings differ by {spread:.3e}")]
    NotTimeIndependent { spread: f64 },

    #[error("integrator could not meet tolerance at t = {t} (step shrank to {step:.3e})")]
    IntegratorFailure { t: f64, step: f64 },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("measurement outcome index {0} is outside 1..=4")]
    InvalidOutcome(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("truncated space of dimension {dim} exceeds the limit of {limit}")]
    DimensionOverflow { dim: usize, limit: usize },

    #[error("truncation dimension {0} is too small (must be at least 2)")]
    TruncationTooSmall(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
