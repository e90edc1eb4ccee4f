use thiserror::Error;

/// Errors raised by the partition, orbit and duality operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("parts must be positive and weakly decreasing: {0:?}")]
    NotDecreasing(Vec<i64>),

    #[error("size/kind mismatch: size {size} cannot carry kind {kind}")]
    SizeKindMismatch { size: usize, kind: char },

    #[error("partition {partition} is not of type {kind}")]
    WrongType { partition: String, kind: char },

    #[error("dominance is only defined for equal sizes ({0} vs {1})")]
    SizeMismatch(usize, usize),

    #[error("uparrow parity violation on {0}")]
    UparrowParity(String),

    #[error("operation needs {0}")]
    Precondition(String),

    #[error("multiplicity {mult} of part {part} exceeds 2")]
    MultiplicityTooLarge { part: usize, mult: usize },

    #[error("requires distinguished datum")]
    NotDistinguished,

    #[error("invalid marking: {0}")]
    InvalidMarking(String),

    #[error("unsupported for kind {0}")]
    UnsupportedKind(char),

    #[error("unknown table key: {0}")]
    UnknownKey(String),

    #[error("table data: {0}")]
    Table(String),
}

pub type Result<T> = std::result::Result<T, Error>;
