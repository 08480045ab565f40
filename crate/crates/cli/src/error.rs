use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

/// Process exit status for invalid arguments.
pub const EXIT_INVALID: i32 = 2;
/// Process exit status for eigen-solver failures.
pub const EXIT_SOLVER: i32 = 3;
/// Process exit status for failed checks and I/O problems.
pub const EXIT_FAILURE: i32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Model(#[from] tc_gamma::Error),

    #[error("gamma = {gamma}: {label} value {lower} exceeds the upper bound {upper}")]
    Sandwich {
        gamma: f64,
        label: String,
        lower: f64,
        upper: f64,
    },

    #[error("{failed} of {total} checks failed")]
    VerifyFailed { failed: usize, total: usize },

    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::InvalidArgument(_) => EXIT_INVALID,
            Self::Model(tc_gamma::Error::InvalidParameter(_)) => EXIT_INVALID,
            Self::Model(_) => EXIT_SOLVER,
            _ => EXIT_FAILURE,
        }
    }
}
