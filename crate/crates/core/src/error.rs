use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty dataset: N ≥ 2 required, got {0} series")]
    TooFewSeries(usize),

    #[error("series too short: M ≥ 2 required, got {0} points")]
    SeriesTooShort(usize),

    #[error("ragged row {row}: expected {expected} values, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("non-finite value at row {row}, column {column}")]
    NonFinite { row: usize, column: usize },

    #[error("label count {labels} does not match series count {series}")]
    LabelCount { labels: usize, series: usize },

    #[error("at least 2 distinct classes required, found {0}")]
    SingleClass(usize),

    #[error("shapelet length {length} does not fit a series of length {series_len}")]
    ShapeletLength { length: usize, series_len: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("enumeration guard exceeded: {pairs} pairs > limit {limit}")]
    EnumerationTooLarge { pairs: u128, limit: u128 },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: ragged line {line}: expected {expected} values, found {found}", path.display())]
    RaggedLine {
        path: PathBuf,
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("{}: line {line}, column {column}: cannot parse {token:?}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        token: String,
    },

    #[error("{}: no series found", path.display())]
    EmptyFile { path: PathBuf },

    #[error("malformed result document: {0}")]
    Document(String),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
