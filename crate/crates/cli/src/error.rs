use dunkl_core::DunklError;

/// Failure of a command, mapped onto the exit code contract.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input, violated parameter constraints.
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Numeric(#[from] DunklError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Config(format!("JSON: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Config(format!("CSV: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
