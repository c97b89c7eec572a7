//! Oldest-particle ages for the `K = 2` chain.
//!
//! With two additions and one deletion per period, the age of a particle is
//! the number of deletions it has survived since placement. The probability
//! that a fixed `i`-subset of the period-`(j-1)` population is wiped out
//! within the next `k` periods has the closed form
//! `p(i,j,k) = (k)_i / (j+k+1)_i` in falling factorials; the module computes
//! it exactly, cross-checks it against a direct enumeration of the deletion
//! process, and evaluates the finite-`n` tail product whose limit is
//! `exp(-x^2)`.

mod simulate;
mod survival;

pub use simulate::{run_with_ages, AgeTable};
pub use survival::{
    falling_factorial, limit_cdf, survival_bruteforce, survival_exact, tail_exact,
    tail_exact_rational,
};

pub use crate::stats::ks_distance;

/// Exact rational arithmetic for the survival probabilities.
pub type ExactRational = num_rational::BigRational;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AgesError {
    #[error("survival probability needs 1 <= i <= min(j,k); got i={i}, j={j}, k={k}")]
    BadSurvivalArgs { i: u64, j: u64, k: u64 },
    #[error("brute-force oracle is guarded to j <= 8 and k <= 8; got j={j}, k={k}")]
    OracleRange { j: u64, k: u64 },
    #[error("exact tail product is guarded to n <= 10^4, got {0}")]
    TailRange(u64),
}
