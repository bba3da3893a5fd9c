//! CLI error classification and exit codes.

use std::path::PathBuf;
use thiserror::Error;

use ring_ob_core::ModelError;

/// Errors surfaced by the CLI, each mapped to a documented exit code:
/// 1 I/O, 2 parse, 3 validation, 4 numerical range.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid `{key}`: {message}")]
    Validation { key: String, message: String },

    #[error("numerical range error: {0}")]
    Range(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Parse { .. } => 2,
            CliError::Validation { .. } => 3,
            CliError::Range(_) => 4,
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    pub fn validation(key: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Validation {
            key: key.into(),
            message: message.into(),
        }
    }

    /// Classifies a model error: parameter problems are configuration
    /// mistakes, everything else is a numerical range failure.
    pub fn from_model(err: ModelError) -> Self {
        match err {
            ModelError::InvalidParameter { name, reason } => CliError::Validation {
                key: name.to_string(),
                message: reason,
            },
            other => CliError::Range(other.to_string()),
        }
    }
}
