use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("WAV error on {path}: {message}")]
    Wav { path: PathBuf, message: String },

    #[error("degenerate signal: {0}")]
    DegenerateSignal(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("input too short: need at least {needed} samples, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("{path}: row {row}: {message}")]
    Schema { path: PathBuf, row: usize, message: String },

    #[error("{0}")]
    Validation(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("protocol error: {0}")]
    Protocol(String),

    #[error("conversion of clip {clip_id} failed: {source}")]
    ClipFailed {
        clip_id: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::DegenerateSignal(msg.into())
    }

    /// True for errors caused by bad user input (files, schemas, parameters)
    /// rather than failures during processing.
    pub fn is_validation(&self) -> bool {
        match self {
            Error::Io { .. }
            | Error::Wav { .. }
            | Error::InvalidParameter(_)
            | Error::LengthMismatch { .. }
            | Error::TooShort { .. }
            | Error::Schema { .. }
            | Error::Validation(_)
            | Error::Config(_)
            | Error::Protocol(_) => true,
            Error::DegenerateSignal(_) | Error::ClipFailed { .. } => false,
        }
    }
}
