use std::path::Path;

use thiserror::Error;

/// Failure classes, each with a fixed process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    pub fn io(path: impl AsRef<Path>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    pub fn invalid(flag: &str, value: impl std::fmt::Display, reason: &str) -> Self {
        CliError::Usage(format!("invalid value '{value}' for '--{flag}': {reason}"))
    }
}

impl From<pathspin_core::Error> for CliError {
    fn from(e: pathspin_core::Error) -> Self {
        match e {
            pathspin_core::Error::InvalidParameter {
                name,
                value,
                reason,
            } => CliError::invalid(name, value, reason),
            other => CliError::Failed(other.to_string()),
        }
    }
}
