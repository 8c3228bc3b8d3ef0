use thiserror::Error;

/// Errors raised by parsing, construction and verification.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// True for errors caused by bad user input rather than internal failures.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Invariant(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
