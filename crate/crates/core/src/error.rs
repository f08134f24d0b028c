use thiserror::Error;

/// Errors raised by the library. Variants map onto CLI exit codes in `reports`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("base must be at least 2, got {0}")]
    InvalidBase(u64),
    #[error("input must be positive")]
    NonPositive,
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("prime set must be non-empty")]
    EmptyPrimeSet,
    #[error("prime {0} listed twice")]
    DuplicatePrime(u64),
    #[error("repeated exponent {0}")]
    RepeatedExponent(u32),
    #[error("digit {digit} out of range 1..{base}")]
    DigitOutOfRange { digit: u64, base: u64 },
    #[error("no exponent-0 term: value would be divisible by the base")]
    MissingUnitTerm,
    #[error("the two bases of a three-term sequence must differ")]
    EqualBases,
    #[error("linear form needs at least two terms, got {0}")]
    TooFewTerms(usize),
    #[error("product of powers equals 1 (the linear form vanishes)")]
    TrivialProduct,
    #[error("rational {0} is not positive")]
    NonPositiveRational(String),
    #[error("delta must lie in (0, 1/2], got {0}")]
    DeltaOutOfRange(String),
    #[error("p = {p} divides a numerator or denominator of the linear form")]
    NotPadicUnit { p: u64 },
    #[error("exponent ordering or size precondition violated: {0}")]
    ExponentPrecondition(String),
    #[error("exact evaluation budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("outside domain: {0}")]
    Domain(String),
    #[error("enclosure could not decide {0} within the precision cap")]
    Undecided(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
