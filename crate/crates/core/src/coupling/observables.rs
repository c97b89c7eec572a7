use super::CouplingError;
use crate::lattice1d::{StepKind, StepRecord};
use serde::{Deserialize, Serialize};

/// The proximity-count process and its event times. `gamma[m]` is |C^I|
/// after `m` elementary steps (index 0 is the pre-run state).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaSeries {
    pub gamma: Vec<u32>,
    /// `v[0]` is the first step with a positive value; later entries are the
    /// successive points of strict increase after it.
    pub increase_times: Vec<usize>,
    /// For each increase time, the first later step at which the value
    /// strictly decreases.
    pub first_decrease: Vec<Option<usize>>,
    /// For each increase time, the first later step at which the value
    /// returns to zero.
    pub zero_return: Vec<Option<usize>>,
}

/// Build the step-indexed proximity-count process from a per-step log.
pub fn gamma_series(steps: &[StepRecord], initial_ci: u32) -> Result<GammaSeries, CouplingError> {
    // A log assembled from the external 4-field JSONL has no labeling data.
    let mut gamma = Vec::with_capacity(steps.len() + 1);
    gamma.push(initial_ci);
    for s in steps {
        gamma.push(s.proximity.ok_or(CouplingError::MissingLabeling)?.ci_after);
    }

    let mut increase_times = Vec::new();
    if let Some(v0) = gamma.iter().position(|&g| g > 0) {
        increase_times.push(v0);
        for m in (v0 + 1)..gamma.len() {
            if gamma[m] > gamma[m - 1] {
                increase_times.push(m);
            }
        }
    }
    let first_decrease = increase_times
        .iter()
        .map(|&v| ((v + 1)..gamma.len()).find(|&m| gamma[m] < gamma[m - 1]))
        .collect();
    let zero_return = increase_times
        .iter()
        .map(|&v| ((v + 1)..gamma.len()).find(|&m| gamma[m] == 0))
        .collect();
    Ok(GammaSeries { gamma, increase_times, first_decrease, zero_return })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuccessKind {
    /// Deletion-step draw at or below `ln N / N`.
    D,
    /// Any draw above `1 - 1/ln N`.
    A,
}

/// Indices of qualifying draws. `step_kinds[i]` classifies draw `i`;
/// d-successes are restricted to deletion steps.
pub fn success_marks(
    draws: &[f64],
    kind: SuccessKind,
    n: u64,
    step_kinds: &[StepKind],
) -> Vec<usize> {
    let ln_n = (n as f64).ln();
    match kind {
        SuccessKind::D => {
            let thr = ln_n / n as f64;
            draws
                .iter()
                .zip(step_kinds)
                .enumerate()
                .filter(|(_, (&u, &k))| k == StepKind::Del && u <= thr)
                .map(|(i, _)| i)
                .collect()
        }
        SuccessKind::A => {
            let thr = 1.0 - 1.0 / ln_n;
            draws
                .iter()
                .enumerate()
                .filter(|(_, &u)| u > thr)
                .map(|(i, _)| i)
                .collect()
        }
    }
}
