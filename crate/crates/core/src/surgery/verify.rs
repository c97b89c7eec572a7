use super::{
    choose_attach_points, constrained_distance, PatchDecomposition, SurgeryError, SurgerySample,
    CONTOUR_DISTANCE,
};
use crate::dla2d::{cluster_from_paths, hole_count, Cluster2D, Point};
use serde::{Deserialize, Serialize};

/// Per-cluster geometric checks (exact, tolerance zero).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeometryReport {
    pub cluster_size: usize,
    pub patch_count: usize,
    pub contour_points: usize,
    pub contour_distance_exact: bool,
    pub gamma_lengths_exact: bool,
    pub gamma_stay_together: bool,
    /// Arc point caps from the width bound: left arc within the ball of
    /// radius 121, whole arc within 363.
    pub arc_bounds_ok: bool,
    /// Cluster-avoiding route through a side wall to the middle geodesic is
    /// never shorter than 20.
    pub through_wall_bound_ok: bool,
    pub attach_fold_exact: bool,
    pub witness_enclosed: bool,
}

impl GeometryReport {
    pub fn all_ok(&self) -> bool {
        self.contour_distance_exact
            && self.gamma_lengths_exact
            && self.gamma_stay_together
            && self.arc_bounds_ok
            && self.through_wall_bound_ok
            && self.attach_fold_exact
            && self.witness_enclosed
    }
}

/// lattice points inside the l1 ball of radius r
fn ball_count(r: i64) -> i64 {
    2 * r * r + 2 * r + 1
}

pub fn verify_patch_geometry(
    a: &Cluster2D,
    decomp: &PatchDecomposition,
) -> Result<GeometryReport, SurgeryError> {
    let mut contour_distance_exact = true;
    for &p in decomp.contour.points() {
        if a.l1_distance_to(p) != CONTOUR_DISTANCE {
            contour_distance_exact = false;
        }
    }

    let mut gamma_lengths_exact = true;
    let mut gamma_stay_together = true;
    {
        let mut succ: std::collections::HashMap<Point, Point> = std::collections::HashMap::new();
        for path in decomp.gammas.paths() {
            if path.len() != CONTOUR_DISTANCE as usize || !a.contains(path.end()) {
                gamma_lengths_exact = false;
            }
            for w in path.points().windows(2) {
                match succ.get(&w[0]) {
                    Some(&n) if n != w[1] => gamma_stay_together = false,
                    Some(_) => {}
                    None => {
                        succ.insert(w[0], w[1]);
                    }
                }
            }
        }
    }

    let mut arc_bounds_ok = true;
    for patch in &decomp.patches {
        let m_pos = patch.arc.iter().position(|&p| p == patch.xi_m).unwrap_or(0);
        let left_arc = (m_pos + 1) as i64;
        let whole = patch.arc.len() as i64;
        if left_arc > ball_count(121) || whole > ball_count(121) + ball_count(363) {
            arc_bounds_ok = false;
        }
    }

    // a -> (gamma- or gamma+) -> gamma*: splitting the path at its wall
    // visit gives exact minima for both halves, so the bound check is exact
    let mut through_wall_bound_ok = true;
    for patch in &decomp.patches {
        let star = patch.gamma_star.points();
        for wall in [&patch.gamma_minus, &patch.gamma_plus] {
            for &q in wall.points() {
                if a.contains(q) {
                    continue;
                }
                let d1 = constrained_distance(a, a.points(), &[q], 19);
                let d2 = constrained_distance(a, &[q], star, 19);
                if let (Some(d1), Some(d2)) = (d1, d2) {
                    if d1 + d2 < 20 {
                        through_wall_bound_ok = false;
                    }
                }
            }
        }
    }

    let mut attach_fold_exact = true;
    let mut witness_enclosed = true;
    for patch in &decomp.patches {
        let plan = choose_attach_points(a, patch)?;
        // stepwise fold identity (already asserted inside, re-checked here)
        let mut grown = a.clone();
        for j in 0..7 {
            match cluster_from_paths(&grown, std::slice::from_ref(&plan.beta[j])) {
                Ok(next) if next.contains(plan.x[j]) => grown = next,
                _ => {
                    attach_fold_exact = false;
                    break;
                }
            }
        }
        let report = hole_count(&grown);
        if !report.holes.iter().any(|h| h.contains(&plan.w)) {
            witness_enclosed = false;
        }
    }

    Ok(GeometryReport {
        cluster_size: a.size(),
        patch_count: decomp.patch_count(),
        contour_points: decomp.contour.len(),
        contour_distance_exact,
        gamma_lengths_exact,
        gamma_stay_together,
        arc_bounds_ok,
        through_wall_bound_ok,
        attach_fold_exact,
        witness_enclosed,
    })
}

/// Bound checklist for one surgery sample.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurgeryReport {
    pub cluster_size: usize,
    pub paths: usize,
    pub v7: usize,
    pub hole_before: usize,
    pub hole_after: usize,
    pub hole_gain: i64,
    pub v_loop_max: usize,
    pub catchup_count: usize,
    pub catchup_max_len: usize,
    pub pre_v7_max_component: usize,
    pub hole_gain_ok: bool,
    pub catchup_len_ok: bool,
    pub catchup_count_ok: bool,
    pub component_ok: bool,
}

pub fn verify_surgery(sample: &SurgerySample) -> SurgeryReport {
    let catchup_max_len = sample.catchup_lengths.iter().copied().max().unwrap_or(0);
    let v_loop_max = sample.v_loop_lengths.iter().copied().max().unwrap_or(0);
    let hole_gain = sample.hole_after as i64 - sample.hole_before as i64;
    SurgeryReport {
        cluster_size: sample.cluster_size,
        paths: sample.path_count,
        v7: sample.v7,
        hole_before: sample.hole_before,
        hole_after: sample.hole_after,
        hole_gain,
        v_loop_max,
        catchup_count: sample.catchup_count,
        catchup_max_len,
        pre_v7_max_component: sample.pre_v7_max_component,
        hole_gain_ok: hole_gain >= 1,
        catchup_len_ok: catchup_max_len <= 12,
        catchup_count_ok: sample.catchup_count <= 72,
        component_ok: sample.pre_v7_max_component <= 12,
    }
}

impl SurgeryReport {
    pub fn all_ok(&self) -> bool {
        self.hole_gain_ok && self.catchup_len_ok && self.catchup_count_ok && self.component_ok
    }
}
