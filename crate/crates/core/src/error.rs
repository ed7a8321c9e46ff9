use thiserror::Error;

/// Errors raised by the arithmetic engines and the point-set geometry.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument must be a positive integer, got 0")]
    Zero,
    #[error("{0} is not an odd squarefree integer greater than 1")]
    NotOddSquarefree(u64),
    #[error("Phi_{0}(-x) twist requires an odd index greater than 1")]
    NotOddIndex(u64),
    #[error("coefficient overflow while computing Phi_{n}")]
    Overflow { n: u64 },
    #[error("inexact division at step {k} while computing index {n}")]
    InexactDivision { n: u64, k: u64 },
    #[error("invalid prime list: {0}")]
    InvalidPrimes(String),
    #[error("index {k} out of range for n = {n}: {reason}")]
    OutOfRange {
        n: u64,
        k: u64,
        reason: &'static str,
    },
    #[error("point ({c}, {n}) is not a nontrivial coefficient point")]
    TrivialPoint { c: i64, n: u64 },
    #[error("operation is undefined on an empty point set")]
    EmptySet,
    #[error("point ({c}, {n}) lies outside the unit square under scale [{c_scale}, {n_scale}]")]
    OutsideUnitSquare {
        c: i64,
        n: u64,
        c_scale: u64,
        n_scale: u64,
    },
    #[error("trim fraction {0} is outside [0, 0.5)")]
    InvalidTrim(f64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
