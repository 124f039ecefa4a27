use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("position {pos} out of range for sequence of length {len}")]
    Range { pos: usize, len: usize },

    #[error("invalid range: lo {lo} > hi {hi}")]
    InvalidRange { lo: usize, hi: usize },

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("comparison callback reported two equal keys; inputs must be distinct")]
    DuplicateKeys,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cannot write {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed table: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
