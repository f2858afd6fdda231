use thiserror::Error;

use crate::partitions::CategoryId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    Singular,
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cannot combine scalars over sqrt({left}) and sqrt({right})")]
    RadicandMismatch { left: u64, right: u64 },
    #[error("value has a nonzero radical part")]
    NotRational,
    #[error("partitions live on different ground sets ({left} vs {right})")]
    GroundMismatch { left: usize, right: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("index entry {entry} outside [1, {n}]")]
    IndexOutOfRange { entry: usize, n: usize },
    #[error("multi-index lengths differ ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("expected {expected} arguments, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("no element of {category}({k}) lies below the given partition")]
    EmptyDownSet { category: CategoryId, k: usize },
    #[error("{category}({k}) is empty")]
    EmptyCategory { category: CategoryId, k: usize },
    #[error("operation is not defined for category {0}")]
    UnsupportedCategory(CategoryId),
    #[error("partition is not an element of the poset")]
    NotAnElement,
    #[error("partition is not an interval partition")]
    NotInterval,
    #[error("cumulant of order {order} is nonzero outside the support of {category}")]
    SupportViolation { category: CategoryId, order: usize },
    #[error("moment vector is not constant on kernel classes: {0}")]
    InconsistentMoments(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
