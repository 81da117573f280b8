/// Errors shared across the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An operation whose precondition excludes a degenerate configuration
    /// (point on line, perpendicular projection collapsing, ...) was handed one.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A policy returned a point that does not lie on the request line.
    #[error("policy contract violation at step {step}: returned point is {distance:e} away from the request line")]
    ContractViolation { step: usize, distance: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::DegenerateInput(msg.into())
    }
}
