use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("precision of {0} digits is below the supported minimum of 30")]
    InvalidPrecision(u32),

    #[error("invalid basis parameters: {0}")]
    InvalidBasis(String),

    #[error("matrix is singular at working precision (vanishing pivot in column {column})")]
    SingularMatrix { column: usize },

    #[error("system dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite {what} at x = {x} in iteration {iteration}")]
    NonFiniteCoefficient {
        what: &'static str,
        x: String,
        iteration: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("cannot parse decimal number {0:?}")]
    Parse(String),

    #[error("invalid solution document: {0}")]
    InvalidSolution(String),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the command-line front-end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SingularMatrix { .. } | Error::DimensionMismatch { .. } => 2,
            Error::NonFiniteCoefficient { .. } => 3,
            Error::Usage(_) => 64,
            _ => 1,
        }
    }
}
