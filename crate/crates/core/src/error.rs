use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty text")]
    EmptyText,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} {value} out of range (bound {bound})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        bound: usize,
    },

    #[error("positions must be strictly increasing and below the universe ({0})")]
    NotIncreasing(String),

    #[error("balancing exceeded its growth bound: {0}")]
    Balance(String),

    #[error("malformed index file: {0}")]
    Format(String),

    #[error("checksum mismatch: stored {stored:#018x}, computed {computed:#018x}")]
    Checksum { stored: u64, computed: u64 },

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range(what: &'static str, value: usize, bound: usize) -> Error {
    Error::OutOfRange { what, value, bound }
}
