use std::io;
use std::path::PathBuf;

use flzero_core::{ParseError, ReasonerError};
use thiserror::Error;

pub const USAGE: u8 = 1;
pub const TIMEOUT: u8 = 2;
pub const MISMATCH: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
}

impl CliError {
    pub fn io(path: &std::path::Path, source: io::Error) -> CliError {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Reasoner(ReasonerError::Timeout | ReasonerError::Inconclusive(_) | ReasonerError::DepthLimit) => {
                TIMEOUT
            }
            _ => USAGE,
        }
    }
}
