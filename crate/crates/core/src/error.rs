use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("permutations at positions {0} and {1} do not commute")]
    NotCommuting(usize, usize),

    #[error("invalid orbit partition: {0}")]
    InvalidPartition(String),

    #[error("{0} must be positive")]
    NotPositive(&'static str),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("non-integral value {value} where an integer was expected ({context})")]
    NonIntegral { value: String, context: String },

    #[error("tuple does not act transitively")]
    NotTransitive,

    #[error("block {block} is not mapped into a single block")]
    StraddlingBlock { block: usize },

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("enumeration budget exceeded: estimated {estimated:.3e} tuple-steps, ceiling {ceiling:.3e}")]
    BudgetExceeded { estimated: f64, ceiling: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cache error: {0}")]
    Cache(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
