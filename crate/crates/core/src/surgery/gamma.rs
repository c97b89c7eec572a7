use super::{Contour, SurgeryError, CONTOUR_DISTANCE};
use crate::dla2d::{neighbors4, Cluster2D, PathZ2, Point};
use std::collections::{HashMap, VecDeque};

/// The merged geodesic family: one length-40 path from every contour lattice
/// point down to the cluster, built so that any two paths sharing a point
/// share their entire suffix from it (each visited point has one successor).
#[derive(Debug, Clone)]
pub struct GammaField {
    paths: Vec<PathZ2>,
    /// d(x, a) for all x within distance 41 of the cluster.
    dist: HashMap<Point, i32>,
}

impl GammaField {
    /// Path for contour index `i`.
    pub fn path(&self, i: usize) -> &PathZ2 {
        &self.paths[i]
    }

    pub fn paths(&self) -> &[PathZ2] {
        &self.paths
    }

    /// Endpoint `y(xi)` of the path at contour index `i`.
    pub fn endpoint(&self, i: usize) -> Point {
        self.paths[i].end()
    }

    /// Cluster distance of `p` if within the computed band.
    pub fn distance(&self, p: Point) -> Option<i32> {
        self.dist.get(&p).copied()
    }
}

/// Multi-source BFS distance field from the cluster, out to `limit`.
fn distance_field(a: &Cluster2D, limit: i32) -> HashMap<Point, i32> {
    let mut dist: HashMap<Point, i32> =
        a.points().iter().map(|&p| (p, 0)).collect();
    let mut queue: VecDeque<Point> = a.points().iter().copied().collect();
    while let Some(p) = queue.pop_front() {
        let d = dist[&p];
        if d == limit {
            continue;
        }
        for q in neighbors4(p) {
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(q) {
                e.insert(d + 1);
                queue.push_back(q);
            }
        }
    }
    dist
}

// Canonical descent preference: south, west, east, north. Any order works;
// it is fixed so rebuilding the field is bit-identical.
const DESCENT: [Point; 4] = [(0, -1), (-1, 0), (1, 0), (0, 1)];

pub fn build_gamma_paths(a: &Cluster2D, contour: &Contour) -> Result<GammaField, SurgeryError> {
    let dist = distance_field(a, CONTOUR_DISTANCE + 1);
    let mut succ: HashMap<Point, Point> = HashMap::new();
    let mut paths = Vec::with_capacity(contour.len());

    for &xi in contour.points() {
        let d0 = *dist
            .get(&xi)
            .ok_or_else(|| SurgeryError::ConstructionBug("contour point outside field".into()))?;
        if d0 != CONTOUR_DISTANCE {
            return Err(SurgeryError::ConstructionBug(format!(
                "contour point {xi:?} at distance {d0}"
            )));
        }
        let mut pts = vec![xi];
        let mut p = xi;
        while !a.contains(p) {
            let next = match succ.get(&p) {
                Some(&n) => n,
                None => {
                    let d = dist[&p];
                    let n = DESCENT
                        .iter()
                        .map(|&s| (p.0 + s.0, p.1 + s.1))
                        .find(|q| dist.get(q).is_some_and(|&dq| dq == d - 1))
                        .ok_or_else(|| {
                            SurgeryError::ConstructionBug("no descent neighbor".into())
                        })?;
                    succ.insert(p, n);
                    n
                }
            };
            pts.push(next);
            p = next;
        }
        if pts.len() != CONTOUR_DISTANCE as usize + 1 {
            return Err(SurgeryError::ConstructionBug(format!(
                "descent from {xi:?} has {} points",
                pts.len()
            )));
        }
        paths.push(PathZ2(pts));
    }
    Ok(GammaField { paths, dist })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surgery::build_contour;

    #[test]
    fn origin_paths_are_straight_rays() {
        let a = Cluster2D::origin();
        let c = build_contour(&a).unwrap();
        let g = build_gamma_paths(&a, &c).unwrap();
        // xi_0 = (0,40): straight vertical descent
        let p0 = g.path(0);
        assert_eq!(p0.start(), (0, 40));
        assert_eq!(p0.end(), (0, 0));
        for (j, &pt) in p0.points().iter().enumerate() {
            assert_eq!(pt, (0, 40 - j as i32));
        }
        for (i, path) in g.paths().iter().enumerate() {
            assert_eq!(path.len(), 40, "path {i} has wrong length");
            assert_eq!(path.end(), (0, 0));
        }
    }

    #[test]
    fn paths_stay_together_after_touching() {
        let mut pts = Vec::new();
        for i in 0..30 {
            pts.push((i, 0));
        }
        for j in 1..5 {
            pts.push((12, j));
        }
        let a = Cluster2D::from_points(&pts).unwrap();
        let c = build_contour(&a).unwrap();
        let g = build_gamma_paths(&a, &c).unwrap();
        // global stay-together: successor of any shared point is unique
        let mut succ: HashMap<Point, Point> = HashMap::new();
        for path in g.paths() {
            for w in path.points().windows(2) {
                if let Some(&n) = succ.get(&w[0]) {
                    assert_eq!(n, w[1], "paths diverge at {:?}", w[0]);
                } else {
                    succ.insert(w[0], w[1]);
                }
            }
        }
        // geodesic property: every point sits at distance (40 - index)
        for path in g.paths() {
            for (j, &pt) in path.points().iter().enumerate() {
                assert_eq!(g.distance(pt), Some(40 - j as i32));
            }
        }
    }
}
