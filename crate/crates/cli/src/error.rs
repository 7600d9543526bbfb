use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config or preconditions: exit code 2.
    #[error("{0}")]
    Usage(String),
    /// A check or statistical test failed: exit code 1.
    #[error("{0}")]
    Verification(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Verification(_) => ExitCode::from(1),
            CliError::Usage(_) | CliError::Io(_) => ExitCode::from(2),
        }
    }
}

impl From<mop_core::Error> for CliError {
    fn from(e: mop_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}
