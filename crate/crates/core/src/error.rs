//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("{value} has no inverse mod {q}")]
    NotInvertible { value: u64, q: u64 },
    #[error("duplicate evaluation point in Vandermonde construction")]
    DuplicatePoint,
    #[error("field too small: need {needed} distinct points but q = {q}")]
    FieldTooSmall { needed: u64, q: u64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("linear system has no solution")]
    NoSolution,
    #[error("subset size {t} exceeds ground set size {ground}")]
    SizeTooLarge { t: usize, ground: usize },
    #[error("set is not a subset of the ground set")]
    NotASubset,
    #[error("subset rank {rank} out of range (max {max})")]
    RankOutOfRange { rank: usize, max: usize },
    #[error("MDS violation: columns {columns:?} are linearly dependent")]
    MdsViolation { columns: Vec<usize> },
    #[error("configuration mismatch: {0}")]
    ConfigMismatch(String),
    #[error("parameter t = {t} outside admissible range [{min}, {max}]")]
    BadT { t: usize, min: usize, max: usize },
    #[error("privacy-key basis deficient for user {user}: cannot span the coded subfile space")]
    KeyBasisDeficient { user: usize },
    #[error("decodability condition {condition} violated: {detail}")]
    ConditionViolated { condition: u8, detail: String },
    #[error("degenerate phi assignment: {0}")]
    DegeneratePhi(String),
    #[error("undecodable: subfile slot {slot} not in the knowledge span")]
    Undecodable { slot: usize },
    #[error("enumeration budget exceeded: need {needed} tuples, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("exact evaluation exceeds digit budget ({estimated} > {budget} digits); request log-space evaluation")]
    DigitBudget { estimated: u64, budget: u64 },
    #[error("memory value outside the curve domain")]
    OutOfRange,
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
