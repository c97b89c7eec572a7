use super::CouplingError;
use crate::rng::UniformStream;
use crate::stats::wilson_interval;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// The dominating random walk: `W_n = -n + sum over the first nK draws of
/// 1{u <= p}` with `p = c / h_of_n`. Returns the series `W_0..W_periods`.
pub fn dominating_walk(
    stream: &mut UniformStream,
    c: f64,
    h_of_n: f64,
    k: u32,
    periods: usize,
) -> Result<Vec<i64>, CouplingError> {
    let p = c / h_of_n;
    if !(0.0..1.0).contains(&p) {
        return Err(CouplingError::BadStepProbability(p));
    }
    let mut series = Vec::with_capacity(periods + 1);
    let mut w = 0i64;
    series.push(w);
    for _ in 0..periods {
        w -= 1;
        for _ in 0..k {
            if stream.next_f64() <= p {
                w += 1;
            }
        }
        series.push(w);
    }
    Ok(series)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OvershootResult {
    pub c: f64,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "K")]
    pub k: u32,
    pub eta: f64,
    pub trials: u64,
    pub hits: u64,
    pub estimate: f64,
    #[serde(rename = "ciLow")]
    pub ci_low: f64,
    #[serde(rename = "ciHigh")]
    pub ci_high: f64,
    pub bound: f64,
}

/// Monte Carlo estimate of the upward-exit probability of the stopped walk:
/// steps are Bernoulli(`c/h(N)`) taken `K` at a time, `S` is the first block
/// count `m` with `Z_{mK} - m >= (eta + (K-1)/K) h(N)` or `<= -K`, and a hit
/// is an upward exit. The reported `bound` is `N^{-(1 + eta K/(K-1) - eps)}`
/// at `eps = 1/2`, the direction the estimate is checked against.
pub fn overshoot_probability_mc(
    c: f64,
    n: u64,
    k: u32,
    eta: f64,
    trials: u64,
    seed: u64,
) -> Result<OvershootResult, CouplingError> {
    let h_n = crate::lattice1d::h(n as f64).map_err(|_| CouplingError::BadStepProbability(0.0))?;
    let p = c / h_n;
    if !(0.0..1.0).contains(&p) {
        return Err(CouplingError::BadStepProbability(p));
    }
    let upper = (eta + (k as f64 - 1.0) / k as f64) * h_n;
    let eps = 0.5;
    let bound = (n as f64).powf(-(1.0 + eta * k as f64 / (k as f64 - 1.0) - eps));

    let chunk: u64 = 4096;
    let chunks = trials.div_ceil(chunk);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let lo = ci * chunk;
            let hi = (lo + chunk).min(trials);
            let mut local = 0u64;
            for t in lo..hi {
                let mut s = UniformStream::new(seed, t);
                let mut z = 0i64;
                let mut m = 0i64;
                loop {
                    for _ in 0..k {
                        if s.next_f64() <= p {
                            z += 1;
                        }
                    }
                    m += 1;
                    let drift = z - m;
                    if drift as f64 >= upper {
                        local += 1;
                        break;
                    }
                    if drift <= -(k as i64) {
                        break;
                    }
                }
            }
            local
        })
        .sum();

    let estimate = hits as f64 / trials.max(1) as f64;
    let (ci_low, ci_high) = wilson_interval(hits, trials);
    Ok(OvershootResult { c, n, k, eta, trials, hits, estimate, ci_low, ci_high, bound })
}
