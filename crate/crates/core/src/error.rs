use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed scalar: {0}")]
    MalformedScalar(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("chart mismatch: dimension {0} vs {1}")]
    ChartMismatch(usize, usize),
    #[error("coordinate index {index} out of range for chart of dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("contraction of a degree-{vector} multivector into a degree-{form} form")]
    ContractionDegree { vector: usize, form: usize },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("function {0} is not admissible")]
    NotAdmissible(String),
    #[error("no section (Y, θ) + (da, 0) in the sub-bundle for factor {0}")]
    NoConformalSection(String),
    #[error("test family too small: need at least {needed}, got {got}")]
    FamilyTooSmall { needed: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
