use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed degree string {input:?}: {reason}")]
    DegreeSyntax { input: String, reason: String },

    #[error("degree {degree} exceeds truncation bound {bound}")]
    DegreeExceedsBound { degree: u32, bound: u32 },

    #[error("{0} is not a sub-multiset of the minuend")]
    NotASubmultiset(String),

    #[error("operation requires a nonempty degree multiset")]
    EmptyMultiset,

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("catalog record {index}: {reason}")]
    CatalogRecord { index: usize, reason: String },

    #[error("enumeration needs a rank or degree bound")]
    UnboundedEnumeration,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("prime classes do not cover all primes: {0}")]
    ClassesDoNotCover(String),

    #[error("too many residue classes modulo {modulus} ({count}); supply explicit regimes")]
    TooManyClasses { modulus: u64, count: u64 },

    #[error("checkpoint mismatch: {0}")]
    CheckpointMismatch(String),

    #[error("invalid search config: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
