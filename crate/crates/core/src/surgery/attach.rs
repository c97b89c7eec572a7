use super::{Patch, SurgeryError};
use crate::dla2d::{cluster_from_paths, Cluster2D, PathZ2, Point};

/// The seven attach targets of a patch with their approach paths from
/// `xi_m`. Folding the paths adds exactly the targets, in order, and the
/// witness point `w` ends up enclosed.
#[derive(Debug, Clone)]
pub struct AttachPlan {
    pub x: [Point; 7],
    pub beta: [PathZ2; 7],
    pub w: Point,
    pub y: Point,
}

#[derive(Clone, Copy)]
struct Basis {
    e1: Point,
    e2: Point,
    w: Point,
}

impl Basis {
    fn at(&self, alpha: i32, beta: i32) -> Point {
        (
            self.w.0 + alpha * self.e1.0 + beta * self.e2.0,
            self.w.1 + alpha * self.e1.1 + beta * self.e2.1,
        )
    }

    fn coords(&self, p: Point) -> (i32, i32) {
        let d = (p.0 - self.w.0, p.1 - self.w.1);
        (d.0 * self.e1.0 + d.1 * self.e1.1, d.0 * self.e2.0 + d.1 * self.e2.1)
    }
}

/// Ring offsets of `w_1..w_7` around `w` (index 0 unused; `w_0 = y`).
const RING: [(i32, i32); 8] = [
    (0, -1), // w_0 = y
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
];

struct CaseRow {
    key: [(i32, i32); 3], // offsets of (gamma_36, gamma_37, gamma_38)
    k2: usize,
    prefix: usize, // gamma prefix index for beta~(w_k2)
    extra: &'static [(i32, i32)],
}

const CASES: [CaseRow; 8] = [
    CaseRow { key: [(3, 0), (2, 0), (1, 0)], k2: 5, prefix: 37, extra: &[(2, 1), (1, 1)] },
    CaseRow { key: [(2, 1), (2, 0), (1, 0)], k2: 5, prefix: 36, extra: &[(1, 1)] },
    CaseRow { key: [(2, 1), (1, 1), (1, 0)], k2: 6, prefix: 36, extra: &[(2, 0), (1, 0)] },
    CaseRow { key: [(1, 2), (1, 1), (1, 0)], k2: 4, prefix: 36, extra: &[(0, 2), (0, 1)] },
    CaseRow { key: [(2, 1), (1, 1), (0, 1)], k2: 6, prefix: 36, extra: &[(2, 0), (1, 0)] },
    CaseRow { key: [(1, 2), (1, 1), (0, 1)], k2: 4, prefix: 36, extra: &[(0, 2), (0, 1)] },
    CaseRow { key: [(1, 2), (0, 2), (0, 1)], k2: 5, prefix: 36, extra: &[(1, 1)] },
    CaseRow { key: [(0, 3), (0, 2), (0, 1)], k2: 5, prefix: 37, extra: &[(1, 2), (1, 1)] },
];

pub fn choose_attach_points(a: &Cluster2D, patch: &Patch) -> Result<AttachPlan, SurgeryError> {
    let gamma = patch.gamma_star.points();
    debug_assert_eq!(gamma.len(), 41);
    let y = gamma[40];
    let w = gamma[39];
    let f2 = (w.0 - y.0, w.1 - y.1);
    let f1 = (f2.1, -f2.0);

    // try the right-handed basis, then its reflection about the y-w line
    let tail = [gamma[36], gamma[37], gamma[38]];
    let (basis, row) = [f1, (-f1.0, -f1.1)]
        .into_iter()
        .find_map(|e1| {
            let b = Basis { e1, e2: f2, w };
            let key = tail.map(|p| b.coords(p));
            CASES.iter().find(|r| r.key == key).map(|r| (b, r))
        })
        .ok_or(SurgeryError::CaseTableMiss)?;

    let ring: Vec<Point> = (0..8).map(|i| basis.at(RING[i].0, RING[i].1)).collect();
    let in_ring = |p: Point| (1..8).any(|i| ring[i] == p);

    // k1: gamma's first hit of the ring (always at index 37 or 38)
    let tau = gamma
        .iter()
        .position(|&p| in_ring(p))
        .ok_or_else(|| SurgeryError::ConstructionBug("geodesic never meets the ring".into()))?;
    let k1 = (1..8)
        .find(|&i| ring[i] == gamma[tau])
        .expect("hit point is on the ring");
    let k2 = row.k2;
    if k1.abs_diff(k2) != 1 {
        return Err(SurgeryError::ConstructionBug(format!(
            "case row pairs non-neighbors k1={k1} k2={k2}"
        )));
    }

    let beta_of = |prefix: usize, extra: &[(i32, i32)]| -> Vec<Point> {
        let mut pts = gamma[..=prefix].to_vec();
        pts.extend(extra.iter().map(|&(al, be)| basis.at(al, be)));
        pts
    };
    let beta_k1 = gamma[..=tau].to_vec();
    let beta_k2 = beta_of(row.prefix, row.extra);

    // ordering rule: if the approach to w_k2 uses a lattice point off the
    // geodesic (other than w_k2 itself), w_k2 attaches first
    let k2_first = row.extra[..row.extra.len() - 1]
        .iter()
        .map(|&(al, be)| basis.at(al, be))
        .any(|z| !gamma.contains(&z));

    let k_minus = k1.min(k2);
    let k_plus = k1.max(k2);
    let m1 = (0..=k_minus)
        .rev()
        .find(|&j| a.is_boundary(ring[j]))
        .ok_or_else(|| SurgeryError::ConstructionBug("no boundary point below k-".into()))?;
    let m2 = (k_plus..8)
        .find(|&j| a.is_boundary(ring[j]))
        .ok_or_else(|| SurgeryError::ConstructionBug("no boundary point above k+".into()))?;
    let l1 = k_minus - m1;
    let l2 = m2 - k_plus;
    if l1 + l2 + 2 > 7 {
        return Err(SurgeryError::ConstructionBug("attach plan overflows seven points".into()));
    }
    let l3 = 7 - (l1 + l2 + 2);
    let beta_minus = if k_minus == k1 { beta_k1.clone() } else { beta_k2.clone() };
    let beta_plus = if k_plus == k1 { beta_k1.clone() } else { beta_k2.clone() };

    let mut x = Vec::with_capacity(7);
    let mut beta = Vec::with_capacity(7);
    // counterclockwise sweep from w_m1 up to just below k-
    for j in 1..=l1 {
        let target = m1 + j - 1;
        let mut pts = beta_minus.clone();
        for i in (target..k_minus).rev() {
            pts.push(ring[i]);
        }
        x.push(ring[target]);
        beta.push(pts);
    }
    // clockwise sweep from w_m2 down to just above k+
    for j in 1..=l2 {
        let target = m2 - j + 1;
        let mut pts = beta_plus.clone();
        pts.extend_from_slice(&ring[(k_plus + 1)..=target]);
        x.push(ring[target]);
        beta.push(pts);
    }
    // the k-pair in the decided order
    let pair = if k2_first { [(k2, &beta_k2), (k1, &beta_k1)] } else { [(k1, &beta_k1), (k2, &beta_k2)] };
    for (ki, b) in pair {
        x.push(ring[ki]);
        beta.push((*b).clone());
    }
    // remaining points walk back up the geodesic from its first ring-adjacent
    // point
    if l3 > 0 {
        let n = gamma
            .iter()
            .position(|&p| p != w && !in_ring(p) && (1..8).any(|i| crate::dla2d::l1_dist(p, ring[i]) == 1))
            .ok_or_else(|| SurgeryError::ConstructionBug("no ring-adjacent geodesic point".into()))?;
        for j in 1..=l3 {
            let idx = n - (j - 1);
            x.push(gamma[idx]);
            beta.push(gamma[..=idx].to_vec());
        }
    }

    let x: [Point; 7] = x
        .try_into()
        .map_err(|_| SurgeryError::ConstructionBug("expected exactly seven targets".into()))?;
    let mut beta_paths = Vec::with_capacity(7);
    for (i, pts) in beta.into_iter().enumerate() {
        let p = PathZ2::new(pts.clone()).map_err(|e| {
            SurgeryError::ConstructionBug(format!(
                "approach path {i} broken: {e}; tail {:?}",
                &pts[pts.len().saturating_sub(8)..]
            ))
        })?;
        if p.start() != patch.xi_m {
            return Err(SurgeryError::ConstructionBug(format!(
                "approach path {i} starts off xi_m"
            )));
        }
        beta_paths.push(p);
    }
    let beta: [PathZ2; 7] = beta_paths.try_into().expect("length checked");

    // property (1): folding the approach paths adds exactly the targets
    let mut expect = a.clone();
    for j in 0..7 {
        if expect.contains(x[j]) {
            return Err(SurgeryError::ConstructionBug(format!("target {:?} occupied", x[j])));
        }
        let grown = cluster_from_paths(&expect, std::slice::from_ref(&beta[j]))
            .map_err(|e| SurgeryError::ConstructionBug(format!("fold failed: {e}")))?;
        if !grown.contains(x[j]) || grown.size() != expect.size() + 1 {
            return Err(SurgeryError::ConstructionBug(format!(
                "fold of path {j} did not add {:?}",
                x[j]
            )));
        }
        expect = grown;
    }
    // each target stays within reach 7 of the geodesic foot
    for &xi in &x {
        if crate::dla2d::l1_dist(xi, y) > 7 {
            return Err(SurgeryError::ConstructionBug(format!("target {xi:?} too far from y*")));
        }
    }
    Ok(AttachPlan { x, beta, w, y })
}
