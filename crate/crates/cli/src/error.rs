use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VERIFY_FAILED: i32 = 1;
    pub const FLAGS: i32 = 2;
    pub const PARSE: i32 = 3;
    pub const DOMAIN: i32 = 4;
    pub const IO: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid flags: {0}")]
    Flags(String),

    #[error("cannot parse {path}: {msg}")]
    Parse { path: PathBuf, msg: String },

    #[error("{0}")]
    Domain(#[from] nrange_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Flags(_) => exit::FLAGS,
            CliError::Parse { .. } => exit::PARSE,
            CliError::Domain(_) => exit::DOMAIN,
            CliError::Io { .. } => exit::IO,
        }
    }

    pub(crate) fn flags(msg: impl Into<String>) -> Self {
        CliError::Flags(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

pub type CliResult<T> = Result<T, CliError>;
