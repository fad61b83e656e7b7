use thiserror::Error;

/// Errors produced by the solver.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("position has {actual} piles but the game has n = {expected}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid game: {0}")]
    InvalidSpec(String),

    #[error("illegal move: {0}")]
    IllegalMove(String),

    #[error("unsupported case: {0}")]
    UnsupportedCase(String),

    #[error("target {target} out of range: {reason}")]
    TargetOutOfRange { target: u64, reason: String },

    #[error("value {target} outside [{low}, {high}]")]
    RangeViolation { target: u64, low: u64, high: u64 },

    #[error("position already has M = {0}, no move to the requested value exists")]
    PrePosition(u64),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("degree sequence is not realizable")]
    NotRealizable,

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("move construction failed self-check: {0}")]
    ConstructionFailed(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("cannot parse position: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
