use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: String, found: String },

    /// A shifted diagonal system has a denominator below the solvability floor.
    #[error("breakdown: {0}")]
    Breakdown(String),

    /// The Sylvester operator (or a dense system) is numerically singular.
    #[error("singular equation: {0}")]
    Singular(String),

    #[error("dense decomposition did not converge: {0}")]
    NoConvergence(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn dims(expected: impl ToString, found: impl ToString) -> Self {
        Error::DimensionMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
