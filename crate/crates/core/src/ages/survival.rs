use super::{AgesError, ExactRational};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Falling factorial `(k)_i = k (k-1) ... (k-i+1)`.
pub fn falling_factorial(k: u64, i: u64) -> BigInt {
    let mut acc = BigInt::one();
    for l in 0..i {
        acc *= BigInt::from(k as i64 - l as i64);
    }
    acc
}

/// Exact probability that a fixed `i`-subset of the `j`-particle population
/// gets fully deleted within `k` periods: `(k)_i / (j+k+1)_i`.
pub fn survival_exact(i: u64, j: u64, k: u64) -> Result<ExactRational, AgesError> {
    if i < 1 || j < i || k < i {
        return Err(AgesError::BadSurvivalArgs { i, j, k });
    }
    Ok(ExactRational::new(falling_factorial(k, i), falling_factorial(j + k + 1, i)))
}

/// Independent oracle: enumerate every deletion branch of the process. In
/// the period starting from a population of size `j+1`, two particles are
/// added and one of the `j+2` is removed, so a marked set of size `m` is hit
/// with probability `m/(j+2)`. Guarded to `j, k <= 8` (at most 2^8 branches).
pub fn survival_bruteforce(i: u64, j: u64, k: u64) -> Result<ExactRational, AgesError> {
    if i < 1 || j < i || k < i {
        return Err(AgesError::BadSurvivalArgs { i, j, k });
    }
    if j > 8 || k > 8 {
        return Err(AgesError::OracleRange { j, k });
    }
    Ok(branch(i, j, k))
}

fn branch(marked: u64, j: u64, periods_left: u64) -> ExactRational {
    if marked == 0 {
        return ExactRational::one();
    }
    if periods_left == 0 {
        return ExactRational::zero();
    }
    let denom = BigInt::from(j + 2);
    let hit = ExactRational::new(BigInt::from(marked), denom.clone());
    let miss = ExactRational::new(BigInt::from(j + 2 - marked), denom);
    hit * branch(marked - 1, j + 1, periods_left - 1)
        + miss * branch(marked, j + 1, periods_left - 1)
}

/// `P((n - O_n)/sqrt(n) > x)` exactly, as the product
/// `prod_{i=1}^{floor(sqrt(n) x)+2} (n - floor(sqrt(n) x) - i) / (n + 3 - i)`
/// evaluated in floating point with factors in increasing-`i` order. A factor
/// that reaches zero (or below) makes the tail exactly zero.
pub fn tail_exact(n: u64, x: f64) -> f64 {
    assert!(n >= 1 && x >= 0.0);
    let s = ((n as f64).sqrt() * x).floor() as i64;
    let count = s + 2;
    let mut prod = 1.0f64;
    for i in 1..=count {
        let num = n as i64 - s - i;
        if num <= 0 {
            return 0.0;
        }
        prod *= num as f64 / (n as i64 + 3 - i) as f64;
    }
    prod
}

/// Exact-rational version of [`tail_exact`]; guarded to `n <= 10^4`.
pub fn tail_exact_rational(n: u64, x: f64) -> Result<ExactRational, AgesError> {
    if n > 10_000 {
        return Err(AgesError::TailRange(n));
    }
    assert!(n >= 1 && x >= 0.0);
    let s = ((n as f64).sqrt() * x).floor() as i64;
    let count = s + 2;
    let mut prod = ExactRational::one();
    for i in 1..=count {
        let num = n as i64 - s - i;
        if num <= 0 {
            return Ok(ExactRational::zero());
        }
        prod *= ExactRational::new(BigInt::from(num), BigInt::from(n as i64 + 3 - i));
    }
    Ok(prod)
}

/// The limit law `F(x) = (1 - exp(-x^2)) 1_{(0,inf)}(x)`.
pub fn limit_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        1.0 - (-x * x).exp()
    }
}
