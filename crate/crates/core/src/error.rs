use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("field is infinite: {0}")]
    InfiniteField(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("duplicate table entry ({i},{j}){}", .k.map(|k| format!(" -> {k}")).unwrap_or_default())]
    DuplicateEntry { i: usize, j: usize, k: Option<usize> },
    #[error("format error: {0}")]
    Format(String),
    #[error("algebra has no unit element")]
    NotUnital,
    #[error("wrong number of arguments: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("empty product")]
    EmptyProduct,
    #[error("algebra is not nilpotent")]
    NotNilpotent,
    #[error("Leibniz order must be at least 2, got {0}")]
    InvalidOrder(usize),
    #[error("map is not a derivation: {0}")]
    NotDerivation(String),
    #[error("the zero map is not admissible here")]
    ZeroDerivation,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unknown catalog instance `{0}`")]
    UnknownInstance(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
