use optocool::Error as CoreError;
use thiserror::Error;

/// Failure of a command, carrying its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    NonConvergence(String),
    #[error("consistency check failed: {0}")]
    Consistency(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 1,
            CliError::NonConvergence(_) => 2,
            CliError::Consistency(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Domain { .. } | CoreError::Precondition(_) => {
                CliError::Validation(e.to_string())
            }
            _ => CliError::NonConvergence(e.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
