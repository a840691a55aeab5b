use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("{what} = {value} out of range (expected {expected})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        expected: String,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),

    #[error("covariance is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("{what} too large for exhaustive search: {size} > {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("singular Markov spec: lambda_{index} = {lambda}")]
    SingularSpec { index: usize, lambda: f64 },

    #[error("invalid Markov spec: {0}")]
    InvalidMarkov(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty sample")]
    EmptySample,
}
