use super::{Cluster2D, DlaError, PathZ2};

/// Deterministic cluster builder: fold each path into the point where it
/// first touches the boundary of the evolving cluster. Cardinality grows by
/// one per path; a path that never touches the evolving boundary is an
/// error (with finite paths the event is detectable and should fail loudly).
pub fn cluster_from_paths(a: &Cluster2D, paths: &[PathZ2]) -> Result<Cluster2D, DlaError> {
    let mut cluster = a.clone();
    for (i, path) in paths.iter().enumerate() {
        let hit = path
            .hit_index(|p| cluster.is_boundary(p))
            .ok_or(DlaError::NonHitting(i))?;
        cluster.add_boundary_point(path.points()[hit]);
    }
    Ok(cluster)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dla2d::Point;

    fn path(pts: &[Point]) -> PathZ2 {
        PathZ2::new(pts.to_vec()).unwrap()
    }

    #[test]
    fn single_path_attaches_at_first_boundary_point() {
        let a = Cluster2D::origin();
        let c = cluster_from_paths(&a, &[path(&[(3, 0), (2, 0), (1, 0)])]).unwrap();
        assert_eq!(c.sorted_points(), vec![(0, 0), (1, 0)]);
    }

    #[test]
    fn missing_path_is_an_error() {
        let a = Cluster2D::origin();
        let err = cluster_from_paths(&a, &[path(&[(3, 3), (3, 4), (3, 5)])]);
        assert!(matches!(err, Err(DlaError::NonHitting(0))));
    }

    #[test]
    fn order_dependence_on_interacting_paths() {
        let a = Cluster2D::origin();
        // non-interacting approaches from opposite sides commute
        let left = path(&[(-3, 0), (-2, 0), (-1, 0)]);
        let right = path(&[(3, 0), (2, 0), (1, 0)]);
        let ab = cluster_from_paths(&a, &[left.clone(), right.clone()]).unwrap();
        let ba = cluster_from_paths(&a, &[right.clone(), left.clone()]).unwrap();
        assert_eq!(ab, ba);

        // an interacting pair: the second path stops early on the grown arm
        let probe = path(&[(3, 0), (2, 0), (2, 1), (1, 1), (0, 1)]);
        let first = cluster_from_paths(&a, &[right.clone(), probe.clone()]).unwrap();
        let second = cluster_from_paths(&a, &[probe, right]).unwrap();
        assert_ne!(first, second, "constructed pair must be order-dependent");
    }

    #[test]
    fn cardinality_tracks_path_count() {
        let a = Cluster2D::origin();
        let paths = vec![
            path(&[(1, 0)]),
            path(&[(0, 1)]),
            path(&[(2, 0)]),
            path(&[(1, 1)]),
        ];
        let c = cluster_from_paths(&a, &paths).unwrap();
        assert_eq!(c.size(), a.size() + paths.len());
    }
}
