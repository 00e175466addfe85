use thiserror::Error;

/// Errors surfaced by the core data model and mining operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A cell could not be parsed under the declared column kind.
    /// Row/column are 1-based data coordinates (the header is row 0).
    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    /// The two tables disagree on the number of entities.
    #[error("shape mismatch: left table has {left} rows, right table has {right}")]
    ShapeMismatch { left: usize, right: usize },

    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),

    #[error("attribute `{attribute}` is {found}, expected {expected}")]
    KindMismatch {
        attribute: String,
        expected: &'static str,
        found: &'static str,
    },

    /// Bitset operands cover different universes.
    #[error("bitset width mismatch: {left} vs {right} bits")]
    WidthMismatch { left: usize, right: usize },

    /// Signatures of different length cannot be merged.
    #[error("signature length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// Minhash of an empty support is undefined; empty literals are
    /// filtered out before hashing.
    #[error("cannot compute a minhash signature for an empty support")]
    EmptySupport,

    /// Query string rejected by the grammar; `position` is a byte offset.
    #[error("grammar error at position {position}: {message}")]
    Grammar { position: usize, message: String },

    /// Invalid mining parameters (thresholds, band shapes, schedules).
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error on {path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
