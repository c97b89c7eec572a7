use super::{DlaError, Point};
use serde::{Deserialize, Serialize};

/// A lattice path: a sequence of points with consecutive entries 4-adjacent.
/// Its length is the number of steps, `points.len() - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathZ2(pub Vec<Point>);

impl PathZ2 {
    pub fn new(points: Vec<Point>) -> Result<Self, DlaError> {
        for (i, w) in points.windows(2).enumerate() {
            if super::l1_dist(w[0], w[1]) != 1 {
                return Err(DlaError::BrokenPath(i));
            }
        }
        Ok(PathZ2(points))
    }

    pub fn len(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn start(&self) -> Point {
        self.0[0]
    }

    pub fn end(&self) -> Point {
        *self.0.last().unwrap()
    }

    pub fn points(&self) -> &[Point] {
        &self.0
    }

    /// First index whose point satisfies the predicate (a hitting time).
    pub fn hit_index(&self, mut hit: impl FnMut(Point) -> bool) -> Option<usize> {
        self.0.iter().position(|&p| hit(p))
    }

    /// The reversed path.
    pub fn reversed(&self) -> PathZ2 {
        let mut v = self.0.clone();
        v.reverse();
        PathZ2(v)
    }

    /// Prefix up to and including index `i`.
    pub fn prefix(&self, i: usize) -> PathZ2 {
        PathZ2(self.0[..=i].to_vec())
    }

    /// Suffix starting at index `i`.
    pub fn suffix(&self, i: usize) -> PathZ2 {
        PathZ2(self.0[i..].to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacency_is_validated() {
        assert!(PathZ2::new(vec![(0, 0), (1, 0), (1, 1)]).is_ok());
        assert!(matches!(PathZ2::new(vec![(0, 0), (1, 1)]), Err(DlaError::BrokenPath(0))));
    }

    #[test]
    fn length_counts_steps() {
        let p = PathZ2::new(vec![(3, 0), (2, 0), (1, 0)]).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.reversed().points(), &[(1, 0), (2, 0), (3, 0)]);
    }
}
