use thiserror::Error;

/// Errors surfaced by constructions, verifiers, and the file formats.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field order {q} exceeds the configured ceiling {ceiling}")]
    SizeCeiling { q: u128, ceiling: u128 },
    #[error("no monic irreducible polynomial of degree {k} over F_{p} was found")]
    NoIrreducible { p: u64, k: u32 },
    #[error("the zero element has no multiplicative order")]
    ZeroElement,
    #[error("no element of multiplicative order >= {required} exists in a field of order {q}")]
    OrderUnavailable { required: u64, q: u64 },
    #[error("operation requires an extension field (k >= 2), got a prime field")]
    NotAnExtension,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("rows are linearly dependent, expected a basis")]
    DependentRows,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("claim kind not accepted here: {0}")]
    ClaimKind(String),
    #[error("enumeration budget exceeded: {need} work units > budget {budget}")]
    Budget { need: u128, budget: u128 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
