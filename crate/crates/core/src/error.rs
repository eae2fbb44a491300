use thiserror::Error;

/// Errors reported by every fallible operation in the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed input: dimension mismatches, unparsable text, bad parameters.
    #[error("input error: {0}")]
    Input(String),
    /// A pairing or structure failed its validation (e.g. not alternating).
    #[error("validation error: {0}")]
    Validation(String),
    /// The pairing has a nontrivial radical; the element is named.
    #[error("degenerate pairing: radical contains {0}")]
    Degenerate(String),
    /// The requested computation exceeds a documented size limit.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// A type or modulus outside the supported range.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Checked integer arithmetic overflowed.
    #[error("arithmetic overflow in {0}")]
    Overflow(String),
    /// An internal invariant that the mathematics guarantees did not hold.
    #[error("soundness alarm: {0}")]
    Soundness(String),
}

impl Error {
    /// Short lowercase name of the variant, as used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Input(_) => "input",
            Error::Validation(_) => "validation",
            Error::Degenerate(_) => "degenerate",
            Error::Capacity(_) => "capacity",
            Error::Unsupported(_) => "unsupported",
            Error::Overflow(_) => "overflow",
            Error::Soundness(_) => "soundness",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
