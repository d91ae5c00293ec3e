use thiserror::Error;

/// Errors raised by ring construction, enumeration and the verification harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid rank {0}: rank must be at least 1")]
    InvalidRank(usize),
    #[error("polynomial is not monic with positive degree: {0}")]
    NotMonic(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("p = {p} is ramified for {poly} (polynomial is not squarefree mod p)")]
    RamifiedPrime { p: u64, poly: String },
    #[error("budget exceeded: {what} needs {needed} but the budget is {budget}")]
    BudgetExceeded {
        what: String,
        needed: u128,
        budget: u128,
    },
    #[error("missing local data for keys {}", format_keys(.0))]
    MissingLocalData(Vec<(u64, u32)>),
    #[error("unsupported group kind: {0}")]
    UnsupportedKind(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("modulus p^m = {p}^{m} does not fit the 63-bit residue arithmetic")]
    ModulusTooLarge { p: u64, m: u32 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn format_keys(keys: &[(u64, u32)]) -> String {
    keys.iter()
        .map(|(p, m)| format!("(p={p}, m={m})"))
        .collect::<Vec<_>>()
        .join(", ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
