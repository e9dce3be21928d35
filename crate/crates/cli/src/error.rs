use std::path::PathBuf;

use anyonic_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or schema-invalid input. `field` is the dotted path of
    /// the offending key when known.
    #[error("config error{}: {message}", field.as_ref().map(|f| format!(" at `{f}`")).unwrap_or_default())]
    Config {
        field: Option<String>,
        message: String,
    },

    #[error("{0}")]
    Numeric(CoreError),

    #[error("comparison mismatch: {0}")]
    Mismatch(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            field: Some(field.into()),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Io { .. } => 2,
            CliError::Numeric(_) => 3,
            CliError::Mismatch(_) => 4,
        }
    }
}

/// Errors that trace back to bad user input are reported as config errors;
/// the rest are numeric or size failures.
impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidLabel { .. }
            | CoreError::InvalidIndex { .. }
            | CoreError::DuplicateInput(_)
            | CoreError::InvalidArgument(_)
            | CoreError::InvalidPermutation(_)
            | CoreError::Parse { .. } => CliError::Config {
                field: None,
                message: e.to_string(),
            },
            other => CliError::Numeric(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
