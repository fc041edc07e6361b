use thiserror::Error;

/// Errors produced by the numerical and parsing routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {lhs} vs {rhs}")]
    Dimension {
        op: &'static str,
        lhs: String,
        rhs: String,
    },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("unknown {kind} `{name}`; valid names: {}", valid.join(", "))]
    NotFound {
        kind: &'static str,
        name: String,
        valid: Vec<String>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dim(op: &'static str, lhs: impl ToString, rhs: impl ToString) -> Self {
        Error::Dimension {
            op,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        }
    }
}
