use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Non-finite or otherwise malformed numeric data.
    #[error("data error: {0}")]
    Data(String),

    /// Mass leaks into the boundary band of the truncated domain.
    #[error("domain too small: {0}")]
    DomainTooSmall(String),

    /// A kernel, profile or transform is not resolved by the sampling.
    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    /// An evaluation point or radius falls outside the grid.
    #[error("out of range: {0}")]
    Range(String),

    #[error("fit error: {0}")]
    Fit(String),

    /// A sampled kernel table does not contain (almost) all of its mass.
    #[error("truncation error: {0}")]
    Truncation(String),

    #[error("accuracy error: {0}")]
    Accuracy(String),

    #[error("config error at line {line}, key `{key}`: {message}")]
    Config {
        line: usize,
        key: String,
        message: String,
    },

    #[error("parse error in {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
