use thiserror::Error;

/// Errors raised by the library.
///
/// Variants fall into two groups that the CLI maps onto distinct exit codes:
/// validation failures (malformed input, violated preconditions) and
/// resource-cap failures (a computation would exceed a configured budget).
#[derive(Debug, Error)]
pub enum Error {
    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },

    #[error("cannot combine elements of different group families: {0}")]
    FamilyMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("vertex cap of {cap} exceeded; ball complete only up to radius {attained_radius}")]
    VertexCap { cap: usize, attained_radius: usize },

    #[error("position {position} leaves the declared window [-{window}, {window}]")]
    WindowExceeded { position: i64, window: i64 },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures caused by a resource budget rather than bad input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::VertexCap { .. } | Error::WindowExceeded { .. })
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
