use super::{Contour, GammaField, SurgeryError, CONTOUR_DISTANCE};
use crate::dla2d::{neighbors4, Cluster2D, Point};
use std::collections::{HashMap, VecDeque};

/// Shortest length of a lattice path from a source point to the target set
/// whose points avoid the cluster except possibly at the two endpoints.
/// Search is capped: `None` means every such path is longer than `cap`
/// (including "no path at all").
pub fn constrained_distance(
    a: &Cluster2D,
    sources: &[Point],
    targets: &[Point],
    cap: usize,
) -> Option<usize> {
    let target_set: std::collections::HashSet<Point> = targets.iter().copied().collect();
    let mut dist: HashMap<Point, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for &s in sources {
        if target_set.contains(&s) {
            return Some(0);
        }
        dist.insert(s, 0);
        queue.push_back(s);
    }
    while let Some(p) = queue.pop_front() {
        let d = dist[&p];
        if d == cap {
            continue;
        }
        for q in neighbors4(p) {
            if target_set.contains(&q) {
                return Some(d + 1);
            }
            if !a.contains(q) && !dist.contains_key(&q) {
                dist.insert(q, d + 1);
                queue.push_back(q);
            }
        }
    }
    None
}

/// The separator selection: alternating scans along the contour picking
/// `v`-points whose geodesic foot is far (in the cluster-avoiding metric)
/// from the previous `u`-geodesic, and `u`-points far from the last
/// `v`-foot. Indices refer to contour positions; the final `u` entry is
/// `contour.len()` and stands for the wrapped-around starting point.
#[derive(Debug, Clone)]
pub struct Separators {
    pub u: Vec<usize>,
    pub v: Vec<usize>,
    /// The u-point dropped when the scan ran off the end of the contour.
    pub dropped_u: Option<usize>,
}

impl Separators {
    /// Number of patches.
    pub fn patch_count(&self) -> usize {
        self.u.len().saturating_sub(1)
    }
}

fn far_enough(a: &Cluster2D, foot: Point, wall: &[Point]) -> bool {
    constrained_distance(a, &[foot], wall, CONTOUR_DISTANCE as usize - 1).is_none()
}

pub fn select_separators(
    a: &Cluster2D,
    contour: &Contour,
    gammas: &GammaField,
) -> Result<Separators, SurgeryError> {
    let l_last = contour.len() - 1; // xi_l
    let mut u = vec![0usize];
    let mut v: Vec<usize> = Vec::new();
    let dropped;

    loop {
        let n_i = *u.last().unwrap();
        // first v in (xi_{n_i+1}, ..., xi_l) whose foot is >= 40 from
        // gamma(u_i)
        let wall = gammas.path(n_i).points();
        let found_v = ((n_i + 1)..=l_last)
            .find(|&idx| far_enough(a, gammas.endpoint(idx), wall));
        let Some(m) = found_v else {
            dropped = Some(u.pop().expect("u starts nonempty"));
            u.push(contour.len()); // wrapped xi_{l+1} = xi_0
            break;
        };
        // first u in (xi_{m+1}, ..., xi_l) whose wall is >= 40 from y(v)
        let foot = gammas.endpoint(m);
        let found_u = ((m + 1)..=l_last)
            .find(|&idx| far_enough(a, foot, gammas.path(idx).points()));
        let Some(next_u) = found_u else {
            dropped = Some(u.pop().expect("u starts nonempty"));
            u.push(contour.len());
            break;
        };
        v.push(m);
        u.push(next_u);
    }

    let i_count = u.len() - 1;
    if i_count < 2 {
        return Err(SurgeryError::ConstructionInfeasible(i_count));
    }
    // The terminating branch replaced the last accepted u with the wrap; at
    // that moment v had exactly one entry per accepted round.
    debug_assert_eq!(v.len(), i_count);
    Ok(Separators { u, v, dropped_u: dropped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surgery::{build_contour, build_gamma_paths};

    #[test]
    fn constrained_distance_examples() {
        let a = Cluster2D::origin();
        // source on target
        assert_eq!(constrained_distance(&a, &[(0, 1)], &[(0, 1)], 10), Some(0));
        // around the origin: (0,1) -> (0,-1) takes 4 steps avoiding 0
        assert_eq!(constrained_distance(&a, &[(0, 1)], &[(0, -1)], 10), Some(4));
        // enclosed source: a one-cell hole cannot reach anything
        let ring = Cluster2D::from_points_any(&[(1, 0), (-1, 0), (0, 1), (0, -1)]).unwrap();
        assert_eq!(constrained_distance(&ring, &[(0, 0)], &[(5, 5)], 50), None);
    }

    #[test]
    fn singleton_cluster_is_infeasible() {
        let a = Cluster2D::origin();
        let c = build_contour(&a).unwrap();
        let g = build_gamma_paths(&a, &c).unwrap();
        assert!(matches!(
            select_separators(&a, &c, &g),
            Err(SurgeryError::ConstructionInfeasible(_))
        ));
    }

    #[test]
    fn long_segment_yields_separators() {
        let pts: Vec<Point> = (0..200).map(|i| (i, 0)).collect();
        let a = Cluster2D::from_points(&pts).unwrap();
        let c = build_contour(&a).unwrap();
        let g = build_gamma_paths(&a, &c).unwrap();
        let sep = select_separators(&a, &c, &g).unwrap();
        assert!(sep.patch_count() >= 2, "I = {}", sep.patch_count());
        assert_eq!(sep.v.len(), sep.patch_count());
        // every selected v is actually >= 40 away from the previous wall
        for (i, &m) in sep.v.iter().enumerate() {
            let wall = g.path(sep.u[i]).points();
            assert!(far_enough(&a, g.endpoint(m), wall));
        }
    }
}
