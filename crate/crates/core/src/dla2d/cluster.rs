use super::{l1, neighbors4, DlaError, Point};
use std::collections::HashSet;

/// Dense centered bitmap over `[-half, half]^2`; grows on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Grid {
    half: i32,
    words: Vec<u64>,
}

impl Grid {
    fn new(half: i32) -> Self {
        let side = (2 * half + 1) as usize;
        Grid { half, words: vec![0; (side * side).div_ceil(64)] }
    }

    #[inline]
    fn bit(&self, p: Point) -> Option<usize> {
        let h = self.half;
        if p.0 < -h || p.0 > h || p.1 < -h || p.1 > h {
            return None;
        }
        let side = (2 * h + 1) as usize;
        Some((p.0 + h) as usize * side + (p.1 + h) as usize)
    }

    #[inline]
    fn get(&self, p: Point) -> bool {
        match self.bit(p) {
            Some(i) => self.words[i >> 6] & (1 << (i & 63)) != 0,
            None => false,
        }
    }

    fn set(&mut self, p: Point) {
        if self.bit(p).is_none() {
            self.grow(p);
        }
        let i = self.bit(p).unwrap();
        self.words[i >> 6] |= 1 << (i & 63);
    }

    fn clear(&mut self, p: Point) {
        if let Some(i) = self.bit(p) {
            self.words[i >> 6] &= !(1 << (i & 63));
        }
    }

    fn grow(&mut self, p: Point) {
        let need = p.0.abs().max(p.1.abs());
        let mut bigger = Grid::new((self.half * 2).max(need + 8).max(16));
        let h = self.half;
        for x in -h..=h {
            for y in -h..=h {
                if self.get((x, y)) {
                    let i = bigger.bit((x, y)).unwrap();
                    bigger.words[i >> 6] |= 1 << (i & 63);
                }
            }
        }
        *self = bigger;
    }
}

/// A finite 4-connected occupied set with a cached boundary.
#[derive(Debug, Clone)]
pub struct Cluster2D {
    occ: Grid,
    bnd: Grid,
    points: Vec<Point>,
    boundary: HashSet<Point>,
    max_l1: i32,
    bbox: (i32, i32, i32, i32), // (min_x, max_x, min_y, max_y)
}

impl Cluster2D {
    pub fn origin() -> Self {
        Cluster2D::from_points(&[(0, 0)]).expect("origin is connected")
    }

    pub fn from_points(points: &[Point]) -> Result<Self, DlaError> {
        let c = Cluster2D::from_points_any(points)?;
        if !c.check_connected() {
            return Err(DlaError::NotConnected);
        }
        Ok(c)
    }

    /// Build without the connectivity check. Hole counting is defined for
    /// arbitrary finite sets; growth operations assume a connected cluster.
    pub fn from_points_any(points: &[Point]) -> Result<Self, DlaError> {
        if points.is_empty() {
            return Err(DlaError::NotConnected);
        }
        let span = points.iter().map(|&p| p.0.abs().max(p.1.abs())).max().unwrap();
        let mut c = Cluster2D {
            occ: Grid::new(span + 8),
            bnd: Grid::new(span + 8),
            points: Vec::with_capacity(points.len()),
            boundary: HashSet::new(),
            max_l1: 0,
            bbox: (points[0].0, points[0].0, points[0].1, points[0].1),
        };
        for &p in points {
            if !c.occ.get(p) {
                c.insert(p);
            }
        }
        Ok(c)
    }

    fn insert(&mut self, p: Point) {
        debug_assert!(!self.occ.get(p));
        self.occ.set(p);
        self.points.push(p);
        self.max_l1 = self.max_l1.max(l1(p));
        self.bbox.0 = self.bbox.0.min(p.0);
        self.bbox.1 = self.bbox.1.max(p.0);
        self.bbox.2 = self.bbox.2.min(p.1);
        self.bbox.3 = self.bbox.3.max(p.1);
        if self.boundary.remove(&p) {
            self.bnd.clear(p);
        }
        for q in neighbors4(p) {
            if !self.occ.get(q) && self.boundary.insert(q) {
                self.bnd.set(q);
            }
        }
    }

    fn check_connected(&self) -> bool {
        let start = self.points[0];
        let mut seen = HashSet::with_capacity(self.points.len());
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(p) = stack.pop() {
            for q in neighbors4(p) {
                if self.occ.get(q) && seen.insert(q) {
                    stack.push(q);
                }
            }
        }
        seen.len() == self.points.len()
    }

    /// Add a point of the boundary to the cluster.
    pub fn add_boundary_point(&mut self, p: Point) {
        debug_assert!(self.is_boundary(p), "grown point must lie on the boundary");
        self.insert(p);
    }

    #[inline]
    pub fn contains(&self, p: Point) -> bool {
        self.occ.get(p)
    }

    /// Membership in the boundary: adjacent to the cluster but not in it.
    #[inline]
    pub fn is_boundary(&self, p: Point) -> bool {
        self.bnd.get(p)
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    /// Points in insertion order.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn boundary(&self) -> &HashSet<Point> {
        &self.boundary
    }

    /// `S(a) = max |x|_1` over the cluster.
    pub fn max_l1(&self) -> i32 {
        self.max_l1
    }

    pub fn bbox(&self) -> (i32, i32, i32, i32) {
        self.bbox
    }

    /// Lattice distance from `p` to the cluster (exact, scans all points).
    pub fn l1_distance_to(&self, p: Point) -> i32 {
        self.points.iter().map(|&q| super::l1_dist(p, q)).min().unwrap()
    }

    /// Recompute the boundary from scratch and compare with the cache.
    pub fn boundary_is_consistent(&self) -> bool {
        let mut fresh = HashSet::new();
        for &p in &self.points {
            for q in neighbors4(p) {
                if !self.occ.get(q) {
                    fresh.insert(q);
                }
            }
        }
        fresh == self.boundary
    }

    /// Points sorted lexicographically, the snapshot-file order.
    pub fn sorted_points(&self) -> Vec<Point> {
        let mut v = self.points.clone();
        v.sort_unstable();
        v
    }
}

impl PartialEq for Cluster2D {
    fn eq(&self, other: &Self) -> bool {
        self.sorted_points() == other.sorted_points()
    }
}

impl Eq for Cluster2D {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_cluster_basics() {
        let c = Cluster2D::origin();
        assert_eq!(c.size(), 1);
        assert_eq!(c.max_l1(), 0);
        assert!(c.is_boundary((0, 1)));
        assert!(!c.is_boundary((1, 1)));
        assert!(c.boundary_is_consistent());
    }

    #[test]
    fn disconnected_rejected() {
        assert!(Cluster2D::from_points(&[(0, 0), (2, 0)]).is_err());
        assert!(Cluster2D::from_points(&[(0, 0), (1, 1)]).is_err(), "diagonal is not 4-adjacent");
        assert!(Cluster2D::from_points(&[]).is_err());
    }

    #[test]
    fn growth_maintains_boundary() {
        let mut c = Cluster2D::origin();
        c.add_boundary_point((0, 1));
        c.add_boundary_point((0, 2));
        assert_eq!(c.size(), 3);
        assert!(c.boundary_is_consistent());
        assert_eq!(c.max_l1(), 2);
    }

    #[test]
    fn grid_grows_transparently() {
        let mut c = Cluster2D::origin();
        for y in 1..60 {
            c.add_boundary_point((0, y));
        }
        assert!(c.contains((0, 59)));
        assert!(c.boundary_is_consistent());
    }
}
