use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Errors produced while reading, validating or decoding data.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("record {id:?}: {message}")]
    InvalidMatrix { id: String, message: String },

    #[error("duplicate matrix id {0:?}")]
    DuplicateId(String),

    #[error("corpus mixes {field} values: {first} and {other}")]
    MixedCorpus {
        field: &'static str,
        first: String,
        other: String,
    },

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("length mismatch: predicted {predicted} units, gold {gold}")]
    LengthMismatch { predicted: usize, gold: usize },

    #[error("index out of range: {0}")]
    Index(String),

    #[error("{0}")]
    Alignment(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
