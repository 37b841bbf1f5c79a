use thiserror::Error;

/// Errors raised by the walk simulator, the compiler and the estimators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("layouts differ")]
    LayoutMismatch,

    #[error("{what} {value} out of range (must be < {bound})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        bound: usize,
    },

    #[error("dimension {dim} exceeds the dense-matrix guard of {limit}")]
    DimensionGuard { dim: usize, limit: usize },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("cannot compile: {0}")]
    Unsupported(String),

    #[error("qubits {0} and {1} are not connected in the coupling map")]
    Disconnected(usize, usize),

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("search space too large: {0}")]
    SearchGuard(String),

    #[error("invalid measurement: {0}")]
    Measurement(String),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
