use std::path::PathBuf;

use thiserror::Error;

/// Process exit code for bad input: unreadable files, parse failures,
/// dimension mismatches.
pub const EXIT_INPUT: i32 = 2;
/// Process exit code for numerical failures such as SVD non-convergence.
pub const EXIT_NUMERICAL: i32 = 3;
/// Process exit code when verification ran but some rows failed.
pub const EXIT_VERIFY_FAILED: i32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}:{column}: {message}")]
    Syntax {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{0}")]
    Input(String),

    #[error(transparent)]
    Core(#[from] qperceptron::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(qperceptron::Error::Numerical(_)) => EXIT_NUMERICAL,
            _ => EXIT_INPUT,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
