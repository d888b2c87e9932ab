use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid discriminant {0}: must be negative and congruent to 0 or 1 mod 4")]
    InvalidDiscriminant(i64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("class polynomial for {disc} not certified at {bits} bits (coefficient {index})")]
    RoundingFailed { disc: i64, bits: u32, index: usize },

    #[error("bound never becomes incompatible for case {0}")]
    Unbounded(String),

    #[error("data file {path}: {detail}")]
    Data { path: PathBuf, detail: String },

    #[error("checksum mismatch for {path}: expected {expected}, found {found}")]
    Checksum {
        path: PathBuf,
        expected: String,
        found: String,
    },

    #[error("scan cap {cap} is below the recorded maximum {needed} for class number {h}")]
    CapTooSmall { h: u32, cap: u64, needed: u64 },

    #[error("class number {h} is beyond the recorded maxima table (max {max_h})")]
    ClassNumberNotTabulated { h: u32, max_h: u32 },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn data(path: impl Into<PathBuf>, detail: impl Into<String>) -> Self {
        Error::Data {
            path: path.into(),
            detail: detail.into(),
        }
    }
}
