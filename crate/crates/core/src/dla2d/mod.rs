//! Diffusion limited aggregation on the square lattice.
//!
//! Growth starts from a finite connected cluster (usually the origin);
//! particles walk in from far away and attach at the first site visited that
//! is adjacent to the cluster. Alongside the stochastic model the module
//! provides the deterministic cluster-from-paths builder (fold a list of
//! lattice paths into attachment points) and hole counting by flood fill,
//! by union-find, and by an incremental split tracker.

mod builder;
mod cluster;
mod holes;
mod path;
mod walk;

pub use builder::cluster_from_paths;
pub use cluster::Cluster2D;
pub use holes::{hole_count, hole_count_union_find, HoleReport, IncrementalHoles};
pub use path::PathZ2;
pub use walk::{
    delta_set, diamond_point, grow, run_dla, sample_entry_point, walk_to_boundary, DlaRun,
    DlaRunConfig, DlaSnapshot, EntryMethod, WalkConfig, WalkHit, WalkMode,
};

use thiserror::Error;

/// Lattice point `(x, y)`.
pub type Point = (i32, i32);

/// `l1` norm `|x| + |y|`.
#[inline]
pub fn l1(p: Point) -> i32 {
    p.0.abs() + p.1.abs()
}

#[inline]
pub fn l1_dist(a: Point, b: Point) -> i32 {
    (a.0 - b.0).abs() + (a.1 - b.1).abs()
}

pub const DIRS: [Point; 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

#[inline]
pub fn neighbors4(p: Point) -> [Point; 4] {
    [(p.0 + 1, p.1), (p.0 - 1, p.1), (p.0, p.1 + 1), (p.0, p.1 - 1)]
}

#[derive(Debug, Error)]
pub enum DlaError {
    #[error("cluster must be nonempty and 4-connected")]
    NotConnected,
    #[error("walk start must lie outside the cluster and its boundary")]
    BadWalkStart,
    #[error("walk exceeded its step budget of {0}")]
    WalkBudget(u64),
    #[error("path {0} never hits the evolving cluster boundary")]
    NonHitting(usize),
    #[error("consecutive path points must be 4-adjacent (index {0})")]
    BrokenPath(usize),
    #[error("delta set needs L >= 1")]
    BadDelta,
}
