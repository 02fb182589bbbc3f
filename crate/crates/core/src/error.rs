use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function being evaluated.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape mismatch: expected {expected:?}, got {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("matrix dimension {n} exceeds the limit of {max}")]
    SizeLimit { n: usize, max: usize },

    #[error("invalid weight sequence: {0}")]
    InvalidWeights(String),

    #[error("invalid spaced sequence: {0}")]
    InvalidSequence(String),

    #[error("{method} did not converge after {iterations} iterations")]
    NotConverged {
        method: &'static str,
        iterations: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
