use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: not valid UTF-8")]
    NotUtf8 { path: PathBuf },
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("duplicate document id {0:?}")]
    DuplicateId(String),
    #[error("document {id:?} has characters outside the alphabet: {offending:?}")]
    OutOfAlphabet { id: String, offending: Vec<char> },
    #[error("need at least 2 documents to split, got {0}")]
    TooFewDocuments(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("symbol {0:#04x} is not in the Huffman table")]
    MissingSymbol(u8),
    #[error("wrong length: expected {expected}, got {actual}")]
    WrongLength { expected: usize, actual: usize },
    #[error("corrupt stream: {0}")]
    Corrupt(String),
    #[error("unknown {kind} {name:?}")]
    Unknown { kind: &'static str, name: String },
}
