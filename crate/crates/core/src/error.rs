use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid knot vector: {0}")]
    InvalidKnots(String),

    #[error("{0}")]
    Domain(String),

    #[error("degenerate span {0}: zero-length knot interval")]
    DegenerateSpan(usize),

    #[error("index {index} out of range (max {max})")]
    Index { index: usize, max: usize },

    #[error("size error: {0}")]
    Size(String),

    #[error("degree {degree} exceeds the supported maximum {cap}")]
    DegreeTooLarge { degree: usize, cap: usize },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}
