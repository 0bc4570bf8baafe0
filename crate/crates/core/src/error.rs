use thiserror::Error;

/// Errors raised by ring construction, character queries and sum evaluation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cyclotomic order must be positive")]
    ZeroOrder,

    #[error("cyclotomic order {0} exceeds the lift cap {1}")]
    OrderOverflow(usize, usize),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("polynomial {0} is reducible over F_{1}")]
    Reducible(String, u64),

    #[error("invalid ring specification: {0}")]
    InvalidSpec(String),

    #[error("ring axiom violated: {0}")]
    AxiomViolation(String),

    #[error("ring size {size} exceeds the cap {cap}")]
    SizeCap { size: usize, cap: usize },

    #[error("element {0} is not a unit")]
    NotUnit(usize),

    #[error("element index {0} out of range")]
    BadElement(usize),

    #[error("not an ideal: {0}")]
    NotIdeal(String),

    #[error("ring {0} is not local")]
    NotLocal(String),

    #[error("ring {0} is not Frobenius")]
    NotFrobenius(String),

    #[error("ring {0} has even characteristic")]
    EvenCharacteristic(String),

    #[error("characters live on different rings")]
    RingMismatch,

    #[error("character is not primitive")]
    NotPrimitive,

    #[error("invalid character: {0}")]
    BadCharacter(String),

    #[error("character precondition violated: {0}")]
    Precondition(String),

    #[error("the zero ring is only valid as a degenerate quotient")]
    ZeroRing,

    #[error("unknown check id {0}")]
    UnknownCheck(String),

    #[error("odd exponent {0} requested for an absolute moment")]
    OddAbsoluteMoment(u32),

    #[error("io error: {0}")]
    Io(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
