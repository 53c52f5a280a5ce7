use std::path::PathBuf;

use focal_core::ErrorKind;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] focal_core::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 I/O, 2 parse, 3 validation, 4 math domain, 5 resource cap.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Validation => 3,
                ErrorKind::Domain => 4,
                ErrorKind::Resource => 5,
            },
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
