use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("resource cap exceeded: {what} = {requested} exceeds the cap of {cap}")]
    ResourceCap {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("trimming produced an empty permutation from {0}")]
    EmptyTrim(String),

    #[error("degenerate graph: {0}")]
    DegenerateGraph(String),

    #[error("multiset is not realisable by any 132-avoiding permutation: {0}")]
    NotRealisable(String),

    #[error("numeric overflow: {0}")]
    NumericOverflow(String),

    #[error("internal consistency violated: {0}")]
    Consistency(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
