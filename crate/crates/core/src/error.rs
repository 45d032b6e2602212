use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("entry {row},{col} is not a polynomial in lambda alone: {value}")]
    NotLambdaPolynomial { row: usize, col: usize, value: String },

    #[error("inexact division during fraction-free elimination")]
    InexactDivision,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("entry {row},{col} cannot be mapped to a real matrix: {reason}")]
    UnsupportedEntry { row: usize, col: usize, reason: String },

    #[error("group element is not unit-diagonal upper triangular: {0}")]
    NotUnipotentForm(String),

    #[error("unsupported substitution: {0}")]
    UnsupportedSubstitution(String),

    #[error("invalid distribution term: {0}")]
    InvalidTerm(String),

    #[error("invalid construction: {0}")]
    InvalidConstruction(String),

    #[error("the zero vector is not a projective point")]
    ZeroVector,
}

pub type Result<T> = std::result::Result<T, Error>;
