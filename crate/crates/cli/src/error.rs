use thiserror::Error;

/// Failures mapped onto process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    /// Exit code 1.
    #[error("{0}")]
    BadInput(String),
    /// Exit code 2.
    #[error("solver failure: {0}")]
    Solver(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::BadInput(_) => 1,
            CliError::Solver(_) => 2,
        }
    }
}

impl From<witent::Error> for CliError {
    fn from(e: witent::Error) -> Self {
        match e {
            witent::Error::Solver(_) | witent::Error::EigenNonConvergence(_) => CliError::Solver(e.to_string()),
            other => CliError::BadInput(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::BadInput(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::BadInput(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
