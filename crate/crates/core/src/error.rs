use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime modulus")]
    NotPrime(u32),
    #[error("value {value} is out of range for GF({q})")]
    ElementOutOfRange { value: u32, q: u32 },
    #[error("elements from GF({left}) and GF({right}) cannot be combined")]
    FieldMismatch { left: u32, right: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("system is column-rank deficient (rank {rank} < {cols} unknowns)")]
    SingularSystem { rank: usize, cols: usize },
    #[error("system is inconsistent")]
    InconsistentSystem,
    #[error("wanted row lies in the span of the interference rows")]
    NotDecodable,
    #[error("{rows} is not divisible by {cols}")]
    NotDivisible { rows: usize, cols: usize },
    #[error("invalid matrix dimensions {m}x{n} (need m >= n >= 1)")]
    InvalidDims { m: usize, n: usize },
    #[error("invalid problem K={messages}, D={after}, U={before}: {reason}")]
    InvalidProblem {
        messages: usize,
        after: usize,
        before: usize,
        reason: &'static str,
    },
    #[error("(a={a}, b={b}) is not in the feasibility set")]
    NotInS { a: usize, b: usize },
    #[error("(a={a}, b={b}) violates gcd(K+a, D+1+a+b) >= U+1+a")]
    ConditionViolated { a: usize, b: usize },
    #[error("decode window starting at row {start} is singular")]
    SingularWindow { start: usize },
    #[error("side information for message {0} is missing")]
    MissingSideInfo(usize),
    #[error("message {0} is not side information for this receiver")]
    UnexpectedSideInfo(usize),
    #[error("receiver {receiver} / slot {slot} out of range")]
    ReceiverOutOfRange { receiver: usize, slot: usize },
    #[error("schema mismatch: {0}")]
    Schema(String),
}
