use polydiff::Error;

/// Failure classes, one per process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("empty operand: {0}")]
    Empty(String),

    /// `best` is the last solver iterate, already rendered for the report.
    #[error("numerical failure: {reason}")]
    Numerical {
        reason: String,
        best: Option<serde_json::Value>,
    },

    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Unsupported(_) => 3,
            CliError::Empty(_) => 4,
            CliError::Numerical { .. } => 5,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::DimensionMismatch { .. } | Error::InvalidInput(_) => CliError::Parse(msg),
            Error::Unsupported(_) => CliError::Unsupported(msg),
            Error::EmptySet => CliError::Empty(msg),
            Error::NumericalFailure { reason, best } => CliError::Numerical {
                reason,
                best: best.map(|p| crate::report::projection(&p)),
            },
        }
    }
}
