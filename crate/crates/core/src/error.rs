use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("mismatched cyclotomic prime: {0} vs {1}")]
    MismatchedPrime(u32, u32),

    #[error("mismatched dimension: {0} vs {1}")]
    MismatchedDimension(usize, usize),

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("enumeration budget exceeded: {requested} > {budget}")]
    Budget { requested: u128, budget: u128 },

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("sort error: {0}")]
    Sort(String),

    #[error("not a polynomial: {0}")]
    NonPolynomial(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("denominator vanishes at q = {0}")]
    VanishingDenominator(u64),

    #[error("depth {depth} too shallow: value changes inside coset {coset}")]
    Unstable { depth: i64, coset: String },

    #[error("hypothesis violated at {witness}: {msg}")]
    DataViolation { msg: String, witness: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("evaluation error: {0}")]
    Eval(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
