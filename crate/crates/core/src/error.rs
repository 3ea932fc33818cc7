use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("order d must be at least 2, got {0}")]
    InvalidOrder(i64),

    #[error("precision of {requested} bits is below the minimum of {min} bits")]
    PrecisionTooLow { requested: u32, min: u32 },

    #[error("precision of {requested} bits exceeds the configured ceiling of {max} bits")]
    PrecisionCeiling { requested: u64, max: u32 },

    #[error("length must be nonnegative, got {0}")]
    NegativeLength(i64),

    #[error("length {requested} exceeds the limit of {max}")]
    LengthLimit { requested: u64, max: u64 },

    #[error("enumeration of compositions of {n} exceeds the cap of {cap}")]
    EnumerationCap { n: i64, cap: i64 },

    #[error("composition part {part} is outside 1..={d}")]
    InvalidPart { part: u64, d: usize },

    #[error("denominator interval contains zero at {bits} bits; refine precision")]
    ZeroDenominator { bits: u32 },

    #[error("logarithm of an interval that is not strictly positive")]
    NonPositiveLog,

    #[error("replication count must be at least 1")]
    ZeroReplications,

    #[error("first-passage level must be at least 1, got {0}")]
    InvalidLevel(i64),

    #[error("conditioning event X > {i} has probability zero for d = {d}")]
    NullConditioning { i: u64, d: usize },

    #[error("index {index} is outside 1..={len}")]
    IndexOutOfRange { index: i64, len: usize },

    #[error("root of q + ... + q^{d} = 1 escaped the bracket (1/2, 1)")]
    BracketViolation { d: usize },

    #[error("{what} could not be decided below {bits} bits")]
    Indeterminate { what: &'static str, bits: u32 },
}
