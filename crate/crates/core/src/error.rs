use thiserror::Error;

/// Errors raised by the linear algebra, problem, scheme and harness layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not symmetric (relative asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not positive definite (pivot {pivot:e} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dense block assembly of size {size} exceeds the cap {cap}")]
    CapExceeded { size: usize, cap: usize },

    #[error("forcing has no closed form; exact solution unavailable")]
    NoClosedForm,

    #[error("matrix market: {0}")]
    MatrixMarket(String),

    #[error("config: {0}")]
    Config(String),

    #[error("{part}: {source}")]
    Part {
        part: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn in_part(self, part: impl Into<String>) -> Self {
        Error::Part {
            part: part.into(),
            source: Box::new(self),
        }
    }

    /// Innermost error, skipping `Part` wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Part { source, .. } => source.root(),
            e => e,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
