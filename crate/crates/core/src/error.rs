use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("enumeration of {requested} items exceeds the budget of {cap}")]
    BudgetExceeded { requested: u128, cap: u128 },

    #[error("invalid label {label} for k={k}")]
    InvalidLabel { label: u32, k: u32 },

    #[error("coordinate index {index} out of range for n={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("labeling {0} must consist of leaves only")]
    NotAllLeaves(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("generator gave up after {attempts} attempts")]
    RetryLimit { attempts: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
