use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed tabular input. `row` and `column` are 1-based; `column` is 0
    /// when the problem concerns the whole row.
    #[error("parse error at row {row}, column {column}: {message}")]
    Parse { row: usize, column: usize, message: String },

    #[error("invalid dependency path: {0}")]
    InvalidPath(String),

    #[error("metric undefined: {0}")]
    UndefinedMetric(&'static str),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("instance has {n} requirements, exact solver capacity is {limit}; enable the heuristic to go beyond")]
    Capacity { n: usize, limit: usize },

    #[error("invalid configuration field `{field}`: {message}")]
    InvalidConfig { field: String, message: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(row: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse { row, column, message: message.into() }
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidConfig { field: field.into(), message: message.into() }
    }
}
