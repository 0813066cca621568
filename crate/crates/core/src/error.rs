use thiserror::Error;

use crate::solvers::ProjectionResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An operand that must be nonempty has no feasible point.
    #[error("set is empty")]
    EmptySet,

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// A solver hit its iteration cap or could not certify its answer.
    /// `best` carries the last iterate when one exists.
    #[error("numerical failure: {reason}")]
    NumericalFailure {
        reason: String,
        best: Option<Box<ProjectionResult>>,
    },
}

impl Error {
    pub(crate) fn numerical(reason: impl Into<String>) -> Self {
        Error::NumericalFailure {
            reason: reason.into(),
            best: None,
        }
    }

    pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, found })
        }
    }
}
