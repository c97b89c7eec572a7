//! Shared statistical helpers: chi-square goodness of fit against the uniform
//! law, lag-1 autocorrelation, the regularized incomplete gamma function that
//! backs the chi-square p-value, Kolmogorov–Smirnov distance, and a binomial
//! confidence interval.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("sequence too short: need at least {need}, got {got}")]
    TooShort { need: usize, got: usize },
    #[error("empty sample")]
    EmptySample,
}

/// ln Γ(x) by the Lanczos approximation (g = 7, n = 9), |err| < 1e-13 for
/// x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    #[allow(clippy::excessive_precision)]
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection formula
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    let t = x + 7.5;
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Regularized lower incomplete gamma P(a, x).
pub fn gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        gamma_p_series(a, x)
    } else {
        1.0 - gamma_q_cf(a, x)
    }
}

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
pub fn gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_p_series(a, x)
    } else {
        gamma_q_cf(a, x)
    }
}

fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut sum = 1.0 / a;
    let mut del = sum;
    for _ in 0..500 {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * 1e-15 {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma(a)).exp()
}

fn gamma_q_cf(a: f64, x: f64) -> f64 {
    // Lentz's continued fraction
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-15 {
            break;
        }
    }
    h * (-x + a * x.ln() - ln_gamma(a)).exp()
}

/// Upper tail of the chi-square law with `df` degrees of freedom.
pub fn chi_square_sf(stat: f64, df: f64) -> f64 {
    gamma_q(df / 2.0, stat / 2.0)
}

#[derive(Debug, Clone, Copy)]
pub struct UniformityReport {
    pub n: usize,
    pub bins: usize,
    pub chi_square: f64,
    pub p_value: f64,
    pub lag1_autocorr: f64,
}

/// Chi-square over `bins` equal cells of `(0,1)` plus Pearson lag-1
/// autocorrelation. Needs at least 1000 points.
pub fn uniformity_tests(seq: &[f64], bins: usize) -> Result<UniformityReport, StatsError> {
    if seq.len() < 1000 {
        return Err(StatsError::TooShort { need: 1000, got: seq.len() });
    }
    let n = seq.len();
    let mut counts = vec![0u64; bins];
    for &u in seq {
        let idx = ((u * bins as f64) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let expect = n as f64 / bins as f64;
    let chi: f64 = counts.iter().map(|&c| (c as f64 - expect).powi(2) / expect).sum();
    let p = chi_square_sf(chi, bins as f64 - 1.0);
    Ok(UniformityReport {
        n,
        bins,
        chi_square: chi,
        p_value: p,
        lag1_autocorr: lag1_autocorrelation(seq),
    })
}

/// Pearson correlation between the sequence and itself shifted by one.
pub fn lag1_autocorrelation(seq: &[f64]) -> f64 {
    let n = seq.len();
    if n < 2 {
        return 0.0;
    }
    let mean = seq.iter().sum::<f64>() / n as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        let d = seq[i] - mean;
        den += d * d;
        if i + 1 < n {
            num += d * (seq[i + 1] - mean);
        }
    }
    if den == 0.0 {
        1.0
    } else {
        num / den
    }
}

/// Sup distance between the empirical CDF of `samples` and `cdf`.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64, StatsError> {
    if samples.is_empty() {
        return Err(StatsError::EmptySample);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        sup = sup.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs());
    }
    Ok(sup)
}

/// Wilson score interval for a binomial proportion at 95% confidence.
pub fn wilson_interval(hits: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_known_values() {
        assert!((ln_gamma(1.0)).abs() < 1e-12);
        assert!((ln_gamma(5.0) - (24.0f64).ln()).abs() < 1e-10);
        assert!((ln_gamma(0.5) - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-10);
    }

    #[test]
    fn chi_square_sf_reference_points() {
        // chi2 with 1 df at x = 3.841: p ~ 0.05
        assert!((chi_square_sf(3.841, 1.0) - 0.05).abs() < 1e-3);
        // 99 df at its mean: around 0.48
        let p = chi_square_sf(99.0, 99.0);
        assert!(p > 0.45 && p < 0.55);
    }

    #[test]
    fn constant_sequence_rejected() {
        let seq = vec![0.5; 2000];
        let rep = uniformity_tests(&seq, 100).unwrap();
        assert!(rep.p_value < 1e-6);
    }

    #[test]
    fn stratified_sequence_has_unit_autocorrelation() {
        let n = 10_000;
        let seq: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let rep = uniformity_tests(&seq, 100).unwrap();
        assert!(rep.lag1_autocorr > 0.99);
    }

    #[test]
    fn short_sequence_is_a_parameter_error() {
        assert!(uniformity_tests(&[0.5; 10], 100).is_err());
    }

    #[test]
    fn ks_distance_examples() {
        // all samples at the median of the uniform law
        let d = ks_distance(&[0.5; 100], |x| x.clamp(0.0, 1.0)).unwrap();
        assert!((d - 0.5).abs() < 1e-12);
        // exact quantiles at levels (i - 1/2)/m
        let m = 200;
        let q: Vec<f64> = (0..m).map(|i| (i as f64 + 0.5) / m as f64).collect();
        let d = ks_distance(&q, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!(d <= 0.5 / m as f64 + 1e-12);
    }

    #[test]
    fn wilson_interval_contains_point_estimate() {
        let (lo, hi) = wilson_interval(10, 1000);
        assert!(lo < 0.01 && 0.01 < hi);
        let (lo0, hi0) = wilson_interval(0, 1000);
        assert!(lo0 < 1e-12);
        assert!(hi0 > 0.0 && hi0 < 0.01);
    }
}
