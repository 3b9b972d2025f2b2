//! Library half of the `xxcorr` binary: the three subcommands and the
//! table formats they emit.

pub mod commands;
pub mod table;

use std::process::ExitCode;

/// Failure of a subcommand, carrying its exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags or arguments (exit 2).
    #[error("{0}")]
    Usage(String),
    /// A numerical check or solver failed (exit 1).
    #[error("{0}")]
    Numerical(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Numerical(_) | CliError::Io(_) => ExitCode::from(1),
        }
    }
}

impl From<xxcorr::Error> for CliError {
    fn from(e: xxcorr::Error) -> Self {
        match e {
            xxcorr::Error::Domain(_) | xxcorr::Error::Size(_) => CliError::Usage(e.to_string()),
            xxcorr::Error::Convergence(_) => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Numerical(format!("csv: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Numerical(format!("json: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub(crate) fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
