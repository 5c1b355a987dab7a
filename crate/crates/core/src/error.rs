use thiserror::Error;

/// Errors raised when an operation's preconditions are not met.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("square root of a negative integer")]
    NegativeInput,

    #[error("modulus {0} must be odd and positive")]
    InvalidModulus(String),

    #[error("{0} has no prime factorization (need n >= 2)")]
    NoFactorization(u64),

    #[error("argument must be positive")]
    ZeroArgument,

    #[error("{base} is not coprime to {modulus}")]
    NotCoprime { base: String, modulus: u64 },

    #[error("the zero polynomial is not allowed")]
    ZeroPolynomial,

    #[error("cannot parse polynomial {0:?}: expected comma-separated integers, constant term first")]
    PolynomialParse(String),

    #[error("base g = {0} must exceed 1")]
    InvalidBase(u64),

    #[error("polynomial has a repeated root")]
    NotSeparable,

    #[error("polynomial is not monic")]
    NotMonic,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus must be odd, got {0}")]
    EvenPrime(u64),

    #[error("prime {prime} divides {what}")]
    PrimeDivides { prime: u64, what: &'static str },

    #[error("the primes must be distinct (both are {0})")]
    SamePrime(u64),

    #[error("periods {0} and {1} are not coprime")]
    PeriodsNotCoprime(u64, u64),

    #[error("alpha = {0} lies outside (1/2, 1)")]
    AlphaOutOfRange(f64),

    #[error("the prime window [{lo}, {hi}] is empty")]
    EmptyWindow { lo: u64, hi: u64 },

    #[error("{0} is not squarefree")]
    NotSquarefree(u64),

    #[error("u({0}) = 0")]
    ZeroTerm(u64),

    #[error("term system must have at least one ascending and one descending term")]
    EmptyTerms,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
