use thiserror::Error;

use crate::fsym::Point;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ambient mismatch: H_{left} vs H_{right}")]
    AmbientMismatch { left: usize, right: usize },

    #[error("invalid point {point} for H_{n}")]
    InvalidPoint { point: Point, n: usize },

    #[error("generator index {index} out of range for H_{n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("not a bijection: {0}")]
    NotBijective(String),

    #[error("element has nonzero translation part {0:?}")]
    NotFinitary(Vec<i64>),

    #[error("degenerate transposition on {0}")]
    Degenerate(Point),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("relation {relation} fails: {witness} is moved")]
    RelationFailure { relation: String, witness: Point },

    #[error("resource limit: {what} reached {size} (cap {cap})")]
    ResourceLimit {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("structure violation: {0}")]
    Structure(String),

    #[error("undefined: {0}")]
    Undefined(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
