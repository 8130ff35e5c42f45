use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty string")]
    EmptyString,

    #[error("entry {value} at position {position} is below 2")]
    EntryBelowTwo { position: usize, value: i64 },

    #[error("position {position} out of range for a string of length {len}")]
    PositionOutOfRange { position: usize, len: usize },

    #[error("entry at position {position} is {value}, not 1")]
    NotBlowDownable { position: usize, value: i64 },

    #[error("{0}")]
    InvalidFraction(String),

    #[error("coefficient does not fit in a 64-bit entry: {0}")]
    Overflow(String),

    #[error("degenerate slide: result has coordinates (0,0)")]
    DegenerateSlide,

    #[error("consistency check failed: {0}")]
    Inconsistent(String),

    #[error("certificate rejected: {0}")]
    Certificate(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
}
