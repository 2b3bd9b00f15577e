use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("statistic is undefined for the empty partition")]
    EmptyPartition,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("modulus {0} is too small (need at least 2)")]
    ModulusTooSmall(u64),
    #[error("series precisions differ: {left} vs {right}")]
    PrecisionMismatch { left: usize, right: usize },
    #[error("constant term must be +1 or -1 for exact inversion")]
    NonUnitConstant,
    #[error("{0} is divisible by 2 or 3")]
    NotCoprimeToSix(i64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(i64),
    #[error("{0} is not a prime >= 5")]
    InvalidPrime(i64),
    #[error("{what} is not prime: {value}")]
    NotPrime { what: &'static str, value: u64 },
    #[error("series method is only available for crank tables")]
    MethodUnavailable,
    #[error("n = {n} is outside the table (max_n = {max_n})")]
    OutOfRange { n: usize, max_n: usize },
    #[error("table covers n <= {have} but {needed} is required")]
    TableTooSmall { needed: usize, have: usize },
    #[error("expected a {expected} table, got {got}")]
    WrongTableKind {
        expected: &'static str,
        got: &'static str,
    },
    #[error("parameter out of range: {0}")]
    Parameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
