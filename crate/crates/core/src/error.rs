use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid channel parameter {field} (position {position}): {reason}")]
    InvalidParameter {
        field: &'static str,
        position: usize,
        reason: String,
    },
    #[error("expected 6 channel parameters, got {0}")]
    ParameterCount(usize),
    #[error("halfplane has zero normal vector")]
    DegenerateHalfPlane,
    #[error("halfplane system is unbounded in the non-negative quadrant")]
    Unbounded,
    #[error("halfplane system excludes the origin")]
    Infeasible,
    #[error("shift {shift} out of range for word length {len}")]
    ShiftOutOfRange { shift: usize, len: usize },
    #[error("word length {got} does not match channel dimension {expected}")]
    WordLength { expected: usize, got: usize },
    #[error("user index must be 1 or 2, got {0}")]
    UserIndex(u8),
    #[error("session needs at least one channel use")]
    EmptySession,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
