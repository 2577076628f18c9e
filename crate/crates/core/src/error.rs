use thiserror::Error;

/// Errors produced by the analysis and construction routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("the subshift is empty")]
    EmptySft,

    #[error("graph is not essential: vertex `{0}` has no bi-infinite walk through it")]
    NotEssential(String),

    #[error("bound {given} too small to certify the period set; need at least {required}")]
    BoundTooSmall { given: u64, required: u64 },

    #[error("period must be positive (use has_aperiodic_point for 0)")]
    ZeroPeriod,

    #[error("not realizable: {0}")]
    NotRealizable(String),

    #[error("set is not eventually periodic in a certifiable way: {0}")]
    Uncertified(String),

    #[error("torus dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid period vector: {0}")]
    InvalidVector(String),

    #[error("group error: {0}")]
    Group(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
