use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("node index {0} out of range")]
    InvalidNode(usize),

    #[error("unknown matrix label `{0}`")]
    UnknownLabel(String),

    #[error("cannot compose {left} after {right}: section {right_to} does not match {left_from}")]
    SectionMismatch {
        left: String,
        right: String,
        left_from: String,
        right_to: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
