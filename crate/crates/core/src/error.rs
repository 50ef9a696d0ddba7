use std::io;

use thiserror::Error;

use crate::linusson::MemoKey;

#[derive(Debug, Error)]
pub enum Error {
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cannot realize a_1 = {a1} independent forms with only {vars} variables")]
    Capacity { a1: u64, vars: usize },

    #[error("the constant term has no minimal variable")]
    UndefinedMinimum,

    #[error("oracle refused: {0}")]
    TooLarge(String),

    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },

    #[error("cache corruption at {key}: stored {stored}, incoming {incoming}")]
    Corruption {
        key: MemoKey,
        stored: u64,
        incoming: u64,
    },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
