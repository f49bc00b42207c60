use thiserror::Error;

/// Failures raised by the arithmetic kernels and prime handling.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} = {value} is out of range: {limit}")]
    Range {
        what: &'static str,
        value: u64,
        limit: String,
    },
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: u64, modulus: u64 },
    #[error("{value} is not divisible by {p}")]
    NotDivisible { value: u64, p: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = {0} violates the hypothesis \"p is prime and p>3\"")]
    Hypothesis(u64),
    #[error("no checks requested")]
    EmptyChecks,
}

pub type Result<T> = std::result::Result<T, Error>;
