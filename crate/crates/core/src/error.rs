use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cannot parse scalar {text:?} over {field}")]
    ScalarParse { text: String, field: String },
    #[error("morphisms are not composable: {0}")]
    NotComposable(String),
    #[error("invalid category: {0}")]
    InvalidCategory(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("invalid separability family: {0}")]
    InvalidFamily(String),
    #[error("not a groupoid: {0}")]
    NotGroupoid(String),
    #[error("not a delta category: {0}")]
    NotDelta(String),
    #[error("inexact sequence: {0}")]
    InexactSequence(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error("cochain budget exceeded: degree {degree} needs {needed} columns, budget is {budget}")]
    BudgetExceeded {
        degree: usize,
        needed: usize,
        budget: usize,
    },
    #[error("internal cross-check failed: {0}")]
    CrossCheck(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
