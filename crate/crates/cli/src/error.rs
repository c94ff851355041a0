//! Error classification that maps failures to process exit codes.

use thiserror::Error;

/// A command failure, split by who is at fault.
///
/// `Usage` covers bad flags, malformed configuration, and referenced input
/// paths that do not exist (exit code 1). `Data` covers inputs that exist
/// but cannot be read or are internally inconsistent (exit code 2).
#[derive(Debug, Error)]
pub enum CliError {
    /// The invocation itself is wrong.
    #[error("{0}")]
    Usage(String),
    /// The invocation is fine but the data is not.
    #[error("{0}")]
    Data(String),
}

impl CliError {
    /// Build a usage error from any displayable message.
    pub fn usage(message: impl Into<String>) -> CliError {
        CliError::Usage(message.into())
    }

    /// Build a data error from any displayable message.
    pub fn data(message: impl Into<String>) -> CliError {
        CliError::Data(message.into())
    }

    /// The process exit code this error maps to.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

/// Shorthand for command results.
pub type CliResult<T> = Result<T, CliError>;

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> CliError {
        CliError::data(err.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> CliError {
        CliError::data(err.to_string())
    }
}

impl From<comet_core::DatasetError> for CliError {
    fn from(err: comet_core::DatasetError) -> CliError {
        CliError::data(err.to_string())
    }
}

impl From<comet_miner::MinerError> for CliError {
    fn from(err: comet_miner::MinerError) -> CliError {
        CliError::data(err.to_string())
    }
}

impl From<comet_filters::FilterError> for CliError {
    fn from(err: comet_filters::FilterError) -> CliError {
        CliError::data(err.to_string())
    }
}

impl From<comet_tokenize::TokenizeError> for CliError {
    fn from(err: comet_tokenize::TokenizeError) -> CliError {
        CliError::data(err.to_string())
    }
}

impl From<comet_engines::EngineError> for CliError {
    fn from(err: comet_engines::EngineError) -> CliError {
        CliError::data(err.to_string())
    }
}

impl From<comet_eval::EvalError> for CliError {
    fn from(err: comet_eval::EvalError) -> CliError {
        CliError::data(err.to_string())
    }
}

/// Fail with a usage error when a referenced input path does not exist.
pub fn require_exists(path: &std::path::Path) -> CliResult<()> {
    if path.exists() {
        Ok(())
    } else {
        Err(CliError::usage(format!(
            "input path does not exist: {}",
            path.display()
        )))
    }
}
