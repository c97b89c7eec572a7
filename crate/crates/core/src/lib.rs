//! Simulation and verification suite for two discrete lattice growth models:
//! a one-dimensional annihilation–creation particle chain and two-dimensional
//! diffusion limited aggregation (DLA).
//!
//! The crate is organized around the models themselves plus the machinery
//! needed to test their limit theorems at desk scale:
//!
//! * [`lattice1d`] — the 1-D chain: per period `K` uniform boundary additions
//!   followed by `K-1` uniform deletions, with gap statistics, new/old gap
//!   labeling and stopping-time observables.
//! * [`coupling`] — adapted stream-selection combinators (the "gambler may
//!   switch tables" scheme), excursion / K-decrease segmentation, dominating
//!   random walks and a Monte Carlo overshoot experiment.
//! * [`ages`] — oldest-particle ages for `K = 2`, the exact survival
//!   probability `p(i,j,k)` in rational arithmetic, the finite-n tail product
//!   and its `1 - exp(-x^2)` limit law.
//! * [`dla2d`] — DLA on the square lattice: growth by random walks from far
//!   away, the deterministic cluster-from-paths builder and hole counting.
//! * [`surgery`] — the deterministic geometry used to force a new hole:
//!   contour at distance 40, merged geodesics, separators, patches, the lucky
//!   patch, attach points and the path-rewriting map `phi`.
//! * [`harness`] — experiment configs, seeding, CSV/JSONL persistence and the
//!   acceptance experiment drivers.

pub mod ages;
pub mod coupling;
pub mod dla2d;
pub mod harness;
pub mod lattice1d;
pub mod rng;
pub mod stats;
pub mod surgery;

pub use dla2d::{Cluster2D, HoleReport, PathZ2, Point};
pub use lattice1d::{GapLabeling, LabeledChain, PeriodObservables, SiteSet1D, Trace};
pub use rng::UniformStream;
pub use surgery::{Contour, PatchDecomposition, SurgeryReport};
