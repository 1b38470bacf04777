use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{len} values do not fit in {slots} slots")]
    OverLength { len: usize, slots: usize },

    #[error("noise budget exhausted, ciphertext can no longer be decrypted")]
    NoiseExhausted,

    #[error("index ({row}, {col}) out of range for a {rows}x{cols} matrix")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("duplicate entry at ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },

    #[error("malformed CSR matrix: {0}")]
    InvalidCsr(String),

    #[error("aligned column {column} has height {height}, larger than chunk size {chunk_size}")]
    ColumnTooTall {
        column: usize,
        height: usize,
        chunk_size: usize,
    },

    #[error("column index {index} out of range for a vector of length {len}")]
    IndexOutOfRange { index: i64, len: usize },

    #[error("dimension mismatch: matrix has {expected} columns, vector has {found} entries")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NonSquare { rows: usize, cols: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unsupported Matrix Market format: {0}")]
    UnsupportedFormat(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("config: {0}")]
    Config(String),

    #[error("fetch failed: {0}")]
    Fetch(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
