use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("insufficient data: need at least {needed}, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("numeric failure after {iterations} iterations: {context}")]
    NumericFailure { iterations: usize, context: String },

    #[error("unsupported resonance {m}:{n}: {reason}")]
    UnsupportedResonance { m: u32, n: u32, reason: String },

    #[error("no separatrix: {0}")]
    NoSeparatrix(String),

    #[error("grid too coarse: level shift {shift:.3e} on refinement exceeds {tolerance:.1e}")]
    ResolutionFailure { shift: f64, tolerance: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
