use thiserror::Error;

use crate::arith::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid prime {0}")]
    InvalidPrime(u64),

    #[error("invalid prime set: {0}")]
    InvalidPrimeSet(String),

    #[error("prime {0} is not a member of the prime set")]
    PrimeNotInSet(u64),

    #[error("default value {value} is not {prime}-adically integral and {prime} has no override")]
    NonIntegralDefault { value: Rational, prime: u64 },

    #[error("points live over different prime sets")]
    PrimeSetMismatch,

    #[error(
        "{value} is not in the diagonal group: denominator prime {prime} is outside the prime set"
    )]
    NotInDiagonalGroup { value: Rational, prime: u64 },

    #[error("orbit length must be at least 1, got {0}")]
    InvalidLength(u64),

    #[error("index {index} outside 1..={len}")]
    IndexOutOfRange { index: u64, len: u64 },

    #[error("degenerate orbit: all {len} orbit points coincide, no positive distance exists")]
    DegenerateOrbit { len: u64 },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("construction hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("direct and lattice paths disagree at n={index}: direct {direct}, lattice {lattice}")]
    PathMismatch {
        index: u64,
        direct: Box<Rational>,
        lattice: Box<Rational>,
    },
}
