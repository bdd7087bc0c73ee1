use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,

    #[error("polynomial is not squarefree")]
    NotSquarefree,

    #[error("polynomial division is not exact")]
    InexactDivision,

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("field of order {p}^{k} exceeds the supported size")]
    FieldTooLarge { p: u64, k: u32 },

    #[error("characteristic 2 is not supported here")]
    CharacteristicTwo,

    #[error("q = {0} is even; the mod-2 theory requires odd characteristic")]
    EvenQ(u64),

    #[error("malformed isogeny label {label:?}: {reason}")]
    MalformedLabel { label: String, reason: String },

    #[error("point counts do not come from an integer Weil polynomial (non-integral step n = {0})")]
    NonIntegralCounts(usize),

    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{what} exceeds the supported range ({detail})")]
    GuardExceeded { what: &'static str, detail: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("census inconsistency in record {record}: {law}")]
    CensusViolation { record: u64, law: String },
}

pub type Result<T> = std::result::Result<T, Error>;
