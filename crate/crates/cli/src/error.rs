use std::path::PathBuf;

use thiserror::Error;

/// Failures that end a run with the usage/config exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Library(#[from] frac_hirota::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("csv input: {0}")]
    Csv(#[from] csv::Error),
}

/// How a successful run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    GateFailed,
    QualityFailed,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::GateFailed => 1,
            Status::QualityFailed => 3,
        }
    }
}

pub const USAGE_CODE: u8 = 2;
