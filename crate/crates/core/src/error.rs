use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("malformed scalar at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalar `{0}` is not rational but the field is `rational`")]
    FieldMismatch(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is not surjective: rank {rank} < {rows} rows")]
    NotSurjective { rank: usize, rows: usize },
    #[error("subspace is not contained in the ambient subspace")]
    NotContained,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("linear system has no solution")]
    Inconsistent,
}

/// Errors raised by the algebraic engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    /// Input data violates a documented invariant (d² ≠ 0, filtration, ...).
    #[error("validation failed: {0}")]
    Validation(String),
    /// Presentation document errors, with a location string.
    #[error("presentation error at {location}: {message}")]
    Presentation { location: String, message: String },
    /// A construction produced data that violates an identity it must satisfy.
    #[error("internal invariant failure: {0}")]
    Invariant(String),
    #[error("precondition not met: {0}")]
    Precondition(String),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}
