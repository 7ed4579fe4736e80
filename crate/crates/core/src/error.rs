use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("level {requested} unreachable: structural level is {structural}")]
    LevelUnreachable { requested: usize, structural: usize },

    #[error("degenerate instance: {0}")]
    DegenerateInstance(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    #[error("rank-deficient regression: {0}")]
    RankDeficient(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    /// Short machine-readable tag for the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::LevelUnreachable { .. } => "level-unreachable",
            Error::DegenerateInstance(_) => "degenerate-instance",
            Error::Format(_) => "format",
            Error::InvalidState(_) => "invalid-state",
            Error::InternalConsistency(_) => "internal-consistency",
            Error::RankDeficient(_) => "rank-deficient",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
