use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("evaluation at a pole: {0}")]
    PoleEvaluation(String),

    #[error("initial matrix is singular")]
    SingularInitial,

    #[error("point at distance {distance:.6e} lies outside the admissible disk of radius {limit:.6e}")]
    OutOfDisk { distance: f64, limit: f64 },

    #[error("accumulated error estimate {estimate:.3e} exceeds tolerance {tolerance:.3e}")]
    PrecisionLoss { estimate: f64, tolerance: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("gauge matrix has zero determinant")]
    SingularGauge,

    #[error("not descendable: {0}")]
    NotDescendable(String),

    #[error("no consistent matrix logarithm: {0}")]
    LogBranchFailure(String),

    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Precondition,
    Convergence,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Syntax { .. } | Error::Shape(_) | Error::InvalidInput(_) => ErrorKind::Input,
            Error::NoConvergence { .. } | Error::PrecisionLoss { .. } => ErrorKind::Convergence,
            Error::Stage { source, .. } => source.kind(),
            _ => ErrorKind::Precondition,
        }
    }

    /// Strip stage labels.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }

    pub(crate) fn in_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
