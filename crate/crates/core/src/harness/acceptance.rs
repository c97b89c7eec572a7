//! The acceptance experiment suite: eleven criteria, each pinned to its
//! tolerance, each printing one pass/fail line through the caller.

use super::config::seed_sequence;
use crate::ages::{limit_cdf, run_with_ages, survival_bruteforce, survival_exact, tail_exact};
use crate::coupling::{
    derive_stream, overshoot_probability_mc, uniformity_tests, AfterHighPolicy, AlternatePolicy,
    ParityPolicy, SelectionPolicy,
};
use crate::dla2d::{run_dla, DlaRunConfig};
use crate::lattice1d::{h, Backend, LabeledChain, SiteSet1D};
use crate::rng::UniformStream;
use crate::surgery::{
    build_patch_decomposition, run_surgery_sample, verify_patch_geometry, verify_surgery,
    PatchDecomposition,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

const ACCEPT_SEED: u64 = 0x11ce_2026;

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    /// Diagnostic criteria report but do not gate the suite.
    pub soft: bool,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let status = match (self.passed, self.soft) {
            (true, _) => "PASS",
            (false, true) => "SOFT-FAIL",
            (false, false) => "FAIL",
        };
        format!("{:4} {:9} {} — {}", self.id, status, self.title, self.detail)
    }
}

/// Run the suite (or the subset selected by `filter`: a criterion id like
/// "A4", a suite name, or "all").
pub fn run_acceptance(filter: &str) -> Vec<CriterionResult> {
    let wanted = |id: &str, suite: &str| {
        filter.eq_ignore_ascii_case("all")
            || filter.eq_ignore_ascii_case(id)
            || filter.eq_ignore_ascii_case(suite)
    };
    let mut out = Vec::new();
    if wanted("A1", "exact") {
        out.push(a1_exact_formula());
    }
    if wanted("A2", "ages") {
        out.push(a2_oldest_particle_law());
    }
    if wanted("A3", "exact") {
        out.push(a3_limit_convergence());
    }
    if wanted("A4", "chain") || wanted("A5", "chain") || wanted("A6", "chain") {
        out.extend(a4_a5_a6_chain_runs(filter));
    }
    if wanted("A7", "coupling") {
        out.push(a7_coupling_uniformity());
    }
    if wanted("A8", "coupling") {
        out.push(a8_overshoot_bound());
    }
    if wanted("A9", "dla") {
        out.push(a9_dla_holes());
    }
    if wanted("A10", "geometry") {
        out.push(a10_geometry_invariants());
    }
    if wanted("A11", "surgery") {
        out.push(a11_surgery_hole_gain());
    }
    out
}

fn a1_exact_formula() -> CriterionResult {
    let mut checked = 0u32;
    for j in 1..=6u64 {
        for k in 1..=8u64 {
            for i in 1..=j.min(k) {
                let exact = survival_exact(i, j, k).expect("preconditions hold");
                let oracle = survival_bruteforce(i, j, k).expect("guarded range");
                if exact != oracle {
                    return CriterionResult {
                        id: "A1",
                        title: "exact survival formula vs enumeration oracle",
                        passed: false,
                        soft: false,
                        detail: format!("mismatch at p({i},{j},{k})"),
                    };
                }
                checked += 1;
            }
        }
    }
    // recurrence in exact rational arithmetic up to i = 12
    let ratio = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    let mut rec_checked = 0u32;
    for n in 2..=12u64 {
        for j in n..=14 {
            for m in (n + 1)..=14 {
                let lhs = survival_exact(n, j, m).expect("preconditions hold");
                let a = survival_exact(n - 1, j + 1, m - 1).expect("preconditions hold");
                let b = survival_exact(n, j + 1, m - 1).expect("preconditions hold");
                let rhs = ratio(n as i64, j as i64 + 2) * a
                    + ratio(j as i64 + 2 - n as i64, j as i64 + 2) * b;
                if lhs != rhs {
                    return CriterionResult {
                        id: "A1",
                        title: "exact survival formula vs enumeration oracle",
                        passed: false,
                        soft: false,
                        detail: format!("recurrence broken at ({n},{j},{m})"),
                    };
                }
                rec_checked += 1;
            }
        }
    }
    CriterionResult {
        id: "A1",
        title: "exact survival formula vs enumeration oracle",
        passed: true,
        soft: false,
        detail: format!("{checked} oracle identities, {rec_checked} recurrence identities, exact"),
    }
}

fn a2_oldest_particle_law() -> CriterionResult {
    let n = 400u64;
    let reps = 20_000u64;
    let scaled: Vec<f64> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let o = run_with_ages(n, ACCEPT_SEED, seed_sequence(ACCEPT_SEED, rep))
                .expect("age run");
            (n as f64 - *o.last().unwrap() as f64) / (n as f64).sqrt()
        })
        .collect();
    let mut detail = String::new();
    let mut ok = true;
    for x in [0.5f64, 1.0, 1.5] {
        let p_hat = scaled.iter().filter(|&&s| s > x).count() as f64 / reps as f64;
        let p = tail_exact(n, x);
        let se = (p * (1.0 - p) / reps as f64).sqrt();
        let within = (p_hat - p).abs() <= 3.0 * se;
        ok &= within;
        detail.push_str(&format!(
            "x={x}: emp {p_hat:.5} vs exact {p:.5} ({:+.2} se); ",
            (p_hat - p) / se
        ));
    }
    CriterionResult {
        id: "A2",
        title: "oldest-particle tail matches the exact product at n=400",
        passed: ok,
        soft: false,
        detail,
    }
}

fn a3_limit_convergence() -> CriterionResult {
    let grid: Vec<f64> = (1..=8).map(|i| 0.25 * i as f64).collect();
    let mut last = f64::INFINITY;
    let mut maxima = Vec::new();
    for n in [100u64, 1_000, 10_000, 100_000] {
        let max_err = grid
            .iter()
            .map(|&x| (tail_exact(n, x) - (1.0 - limit_cdf(x))).abs())
            .fold(0.0f64, f64::max);
        maxima.push(format!("n={n}: {max_err:.5}"));
        if max_err >= last {
            return CriterionResult {
                id: "A3",
                title: "finite-n tail converges monotonically to exp(-x^2)",
                passed: false,
                soft: false,
                detail: format!("not strictly decreasing at n={n} ({})", maxima.join(", ")),
            };
        }
        last = max_err;
    }
    CriterionResult {
        id: "A3",
        title: "finite-n tail converges monotonically to exp(-x^2)",
        passed: true,
        soft: false,
        detail: maxima.join(", "),
    }
}

/// One streamed chain run keeping only (L, G) per period.
fn chain_lg(k: u32, periods: u64, stream_id: u64) -> (Vec<u32>, Vec<u32>) {
    let mut chain = LabeledChain::all_old(SiteSet1D::singleton(0));
    let mut stream = UniformStream::new(ACCEPT_SEED, stream_id);
    let mut ls = Vec::with_capacity(periods as usize + 1);
    let mut gs = Vec::with_capacity(periods as usize + 1);
    ls.push(0);
    gs.push(0);
    for _ in 1..=periods {
        for i in 1..=(2 * k - 1) {
            let u = stream.next_f64();
            if i <= k {
                chain.add_site(u, Backend::Fast);
            } else {
                chain.delete_site(u, Backend::Fast).expect("size stays above one");
            }
        }
        ls.push(chain.sites().total_gap_sites() as u32);
        gs.push(chain.sites().gap_count() as u32);
    }
    (ls, gs)
}

fn a4_a5_a6_chain_runs(filter: &str) -> Vec<CriterionResult> {
    let want = |id: &str| {
        filter.eq_ignore_ascii_case("all")
            || filter.eq_ignore_ascii_case(id)
            || filter.eq_ignore_ascii_case("chain")
    };
    let horizon_k2 = 1u64 << 20; // covers the last doubling window of A5
    let runs: Vec<(u32, Vec<u32>, Vec<u32>)> = [(2u32, horizon_k2), (3, 1_000_000), (4, 1_000_000)]
        .into_par_iter()
        .map(|(k, periods)| {
            let (l, g) = chain_lg(k, periods, 1000 + k as u64);
            (k, l, g)
        })
        .collect();
    let mut out = Vec::new();

    if want("A4") {
        let mut ok = true;
        let mut detail = String::new();
        for (k, ls, _) in &runs {
            let window = &ls[10_000..=1_000_000];
            let floor = *k as i64 - 2;
            let violations = window.iter().filter(|&&l| (l as i64) < floor).count();
            let min_l = window.iter().copied().min().unwrap() as i64;
            let hit_floor = min_l == floor;
            ok &= violations == 0 && hit_floor;
            detail.push_str(&format!("K={k}: {violations} below {floor}, min={min_l}; "));
        }
        out.push(CriterionResult {
            id: "A4",
            title: "gap-site floor K-2 holds and recurs over [1e4, 1e6]",
            passed: ok,
            soft: false,
            detail,
        });
    }

    let (_, l2, g2) = runs.iter().find(|(k, _, _)| *k == 2).expect("K=2 run present");

    if want("A5") {
        let mut freqs = Vec::new();
        for e in 17..=19u32 {
            let (lo, hi) = (1u64 << e, 1u64 << (e + 1));
            let viol = (lo..hi).filter(|&n| l2[n as usize] > g2[n as usize] + 1).count();
            freqs.push(viol as f64 / (hi - lo) as f64);
        }
        let nonincreasing = freqs.windows(2).all(|w| w[1] <= w[0]);
        let last_small = *freqs.last().unwrap() < 0.01;
        out.push(CriterionResult {
            id: "A5",
            title: "L <= G+1 violation frequency decays over doubling windows",
            passed: nonincreasing && last_small,
            soft: false,
            detail: format!("freqs {:.5} / {:.5} / {:.5}", freqs[0], freqs[1], freqs[2]),
        });
    }

    if want("A6") {
        let mut max_ratio = 0.0f64;
        for n in 100_000..=1_000_000u64 {
            let ratio = l2[n as usize] as f64 / h(n as f64).expect("n > e");
            max_ratio = max_ratio.max(ratio);
        }
        let in_band = (0.25..=2.0).contains(&max_ratio);
        out.push(CriterionResult {
            id: "A6",
            title: "windowed max of L/h(n) sits in the factor-4 band around 1/2",
            passed: in_band,
            soft: true,
            detail: format!("max L/h over [1e5,1e6] = {max_ratio:.4}"),
        });
    }
    out
}

fn a7_coupling_uniformity() -> CriterionResult {
    let policies: Vec<(&str, Box<dyn SelectionPolicy + Send>)> = vec![
        ("after-high", Box::new(AfterHighPolicy::new(0.5))),
        ("alternate", Box::new(AlternatePolicy::default())),
        ("parity-block", Box::new(ParityPolicy::default())),
    ];
    let mut ok = true;
    let mut detail = String::new();
    for (name, mut policy) in policies {
        let mut a = UniformStream::new(ACCEPT_SEED, 21);
        let mut b = UniformStream::new(ACCEPT_SEED, 22);
        let draws = derive_stream(&mut a, &mut b, policy.as_mut(), 1_000_000)
            .expect("policies are adapted");
        let rep = uniformity_tests(&draws, 100).expect("length is ample");
        let pass = rep.p_value >= 0.001 && rep.lag1_autocorr.abs() < 0.005;
        ok &= pass;
        detail.push_str(&format!("{name}: p={:.4}, lag1={:+.5}; ", rep.p_value, rep.lag1_autocorr));
    }
    CriterionResult {
        id: "A7",
        title: "derived streams are uniform and uncorrelated",
        passed: ok,
        soft: false,
        detail,
    }
}

fn a8_overshoot_bound() -> CriterionResult {
    // The stopped-walk upward-exit probability is compared against
    // N^-(2-eps) at eps = 1/2, a bound whose validity sets in only as N
    // grows. At these N the exact absorption probability of the block walk
    // (5.07e-4 at N=1e3, 1.04e-5 at N=1e4) exceeds the target, so an honest
    // run reports the excess rather than hiding it.
    let mut ok = true;
    let mut detail = String::new();
    for n in [1_000u64, 10_000] {
        let res = overshoot_probability_mc(1.0, n, 2, 0.5, 1_000_000, ACCEPT_SEED)
            .expect("step probability in range");
        let pass = res.estimate <= res.bound;
        ok &= pass;
        detail.push_str(&format!(
            "N={n}: est {:.3e} (hits {}, ci [{:.2e},{:.2e}]) vs bound {:.3e}; ",
            res.estimate, res.hits, res.ci_low, res.ci_high, res.bound
        ));
    }
    CriterionResult {
        id: "A8",
        title: "overshoot estimate within the pinned N^-(3/2) bound",
        passed: ok,
        soft: false,
        detail,
    }
}

fn a9_dla_holes() -> CriterionResult {
    let runs: Vec<_> = (0..20u64)
        .into_par_iter()
        .map(|r| {
            let cfg = DlaRunConfig {
                snapshot_every: 1000,
                ..DlaRunConfig::quick(3000, seed_sequence(ACCEPT_SEED, 900 + r))
            };
            run_dla(&cfg).expect("dla run")
        })
        .collect();
    let mut all_positive = true;
    let mut trackers_ok = true;
    let (mut sum_mid, mut sum_final) = (0f64, 0f64);
    for run in &runs {
        let at_1000 = run.snapshots.iter().find(|s| s.n == 1000).expect("snapshot at 1000");
        let final_snap = run.snapshots.last().expect("final snapshot");
        all_positive &= final_snap.holes >= 1;
        trackers_ok &= run.tracker_consistent;
        sum_mid += at_1000.holes as f64;
        sum_final += final_snap.holes as f64;
    }
    let mean_mid = sum_mid / runs.len() as f64;
    let mean_final = sum_final / runs.len() as f64;
    CriterionResult {
        id: "A9",
        title: "every DLA run holds a hole by n=3000 and the mean count grows",
        passed: all_positive && mean_final > mean_mid && trackers_ok,
        soft: false,
        detail: format!(
            "20 runs: mean H(1000)={mean_mid:.2}, mean H(3000)={mean_final:.2}, all>=1: {all_positive}, trackers: {trackers_ok}"
        ),
    }
}

/// Deterministically scan seeds for clusters that admit the construction.
fn feasible_clusters(
    count: usize,
    size: u64,
    tag: u64,
) -> Vec<(crate::dla2d::Cluster2D, PatchDecomposition)> {
    let mut found = Vec::new();
    let mut attempt = 0u64;
    while found.len() < count && attempt < 200 {
        let cfg = DlaRunConfig::quick(size, seed_sequence(ACCEPT_SEED, tag + attempt));
        attempt += 1;
        let Ok(run) = run_dla(&cfg) else { continue };
        if let Ok(decomp) = build_patch_decomposition(&run.cluster) {
            found.push((run.cluster, decomp));
        }
    }
    found
}

fn a10_geometry_invariants() -> CriterionResult {
    let clusters = feasible_clusters(10, 1500, 3000);
    if clusters.len() < 10 {
        return CriterionResult {
            id: "A10",
            title: "contour, geodesic and patch invariants on DLA clusters",
            passed: false,
            soft: false,
            detail: format!("only {} feasible clusters found", clusters.len()),
        };
    }
    let reports: Vec<_> = clusters
        .par_iter()
        .map(|(a, d)| verify_patch_geometry(a, d).expect("geometry verification"))
        .collect();
    let all_ok = reports.iter().all(|r| r.all_ok());
    let patches: usize = reports.iter().map(|r| r.patch_count).sum();
    CriterionResult {
        id: "A10",
        title: "contour, geodesic and patch invariants on DLA clusters",
        passed: all_ok,
        soft: false,
        detail: format!("10 clusters, {patches} patches, distances/lengths/folds exact: {all_ok}"),
    }
}

fn a11_surgery_hole_gain() -> CriterionResult {
    let clusters = feasible_clusters(5, 600, 4000);
    if clusters.len() < 5 {
        return CriterionResult {
            id: "A11",
            title: "path surgery forces a hole with bounded loops",
            passed: false,
            soft: false,
            detail: format!("only {} feasible clusters found", clusters.len()),
        };
    }
    let samples: Vec<Vec<crate::surgery::SurgerySample>> = clusters
        .par_iter()
        .enumerate()
        .map(|(ci, (a, d))| {
            (0..20u64)
                .into_par_iter()
                .map(|s| {
                    run_surgery_sample(a, d, ACCEPT_SEED, ((ci as u64) << 32) | s, 400_000_000)
                        .expect("surgery sample")
                })
                .collect()
        })
        .collect();

    let mut gains = 0usize;
    let mut bounds_ok = true;
    let mut total = 0usize;
    for group in &samples {
        for s in group {
            let rep = verify_surgery(s);
            total += 1;
            if rep.hole_gain_ok {
                gains += 1;
            }
            bounds_ok &= rep.catchup_len_ok && rep.catchup_count_ok && rep.component_ok;
        }
    }

    // injectivity spot-check: 10 same-cluster pairs per cluster
    let mut injective = true;
    let mut pairs = 0;
    for group in &samples {
        for pair in group.chunks(2) {
            if let [x, y] = pair {
                pairs += 1;
                if x.input_hash == y.input_hash || x.output_hash == y.output_hash {
                    injective = false;
                }
            }
        }
    }

    // determinism: recomputing a sample yields the identical plan
    let (a0, d0) = &clusters[0];
    let s_again =
        run_surgery_sample(a0, d0, ACCEPT_SEED, 0, 400_000_000).expect("deterministic resample");
    let deterministic = s_again.plan_hash == samples[0][0].plan_hash
        && s_again.output_hash == samples[0][0].output_hash;

    CriterionResult {
        id: "A11",
        title: "path surgery forces a hole with bounded loops",
        passed: gains == total && bounds_ok && injective && deterministic && total == 100,
        soft: false,
        detail: format!(
            "hole gain in {gains}/{total}, loop bounds: {bounds_ok}, {pairs} injectivity pairs distinct: {injective}, deterministic: {deterministic}"
        ),
    }
}
