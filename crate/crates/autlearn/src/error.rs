use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("unsupported numeration system: {0}")]
    UnsupportedSystem(String),
    #[error("not synchronized: {0}")]
    NotSynchronized(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("contract violation: {0}")]
    Contract(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
