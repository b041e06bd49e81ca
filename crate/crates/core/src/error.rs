use thiserror::Error;

pub type Result<T, E = CoverError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid box: {0}")]
    InvalidBox(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid tangency set: {0}")]
    InvalidTangencySet(String),

    #[error("segment is not a side, semi-central or central segment: {0}")]
    UnclassifiedSegment(String),

    #[error("box is not in the strict class (side sum {0} is not below 1)")]
    NotStrict(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid face typing: {0}")]
    InvalidTyping(String),

    #[error("construction failed at step `{step}` after trying epsilons [{history}]")]
    ScheduleExhausted { step: String, history: String },

    #[error("parse error: {0}")]
    Parse(String),
}
