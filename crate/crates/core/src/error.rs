use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {path} at line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("row {row}: {message}")]
    InvalidBar { row: usize, message: String },

    #[error("duplicate bar for {ticker} on {date}")]
    DuplicateBar { ticker: String, date: String },

    #[error("unknown indicator '{name}'; supported: {}", supported.join(", "))]
    UnknownIndicator {
        name: String,
        supported: Vec<String>,
    },

    #[error("indicator '{indicator}': missing or invalid parameter '{param}'")]
    BadParam { indicator: String, param: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("out-of-order input: {next} does not follow {last}")]
    OutOfOrder { last: String, next: String },

    #[error("token '{0}' carries no part-of-speech tag; run tagging first")]
    UntaggedToken(String),

    #[error("unknown emotion label '{0}'")]
    UnknownEmotion(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(String),

    #[error("configuration invalid:\n{}", .0.iter().map(|v| format!("  - {v}")).collect::<Vec<_>>().join("\n"))]
    Config(Vec<String>),

    #[error("scorer backend error: {message}")]
    Backend { message: String, retryable: bool },

    #[error("data error: {0}")]
    Data(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Whether the operation may be retried (network hiccups, rate limits).
    pub fn is_retryable(&self) -> bool {
        matches!(self, Error::Backend { retryable: true, .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
