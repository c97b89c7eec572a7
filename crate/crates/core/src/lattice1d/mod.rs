//! The one-dimensional annihilation–creation chain.
//!
//! One period applied to an occupied set `a`: add `K` particles one by one,
//! each at a site chosen uniformly from the boundary of the current set, then
//! delete `K-1` particles one by one, each chosen uniformly from the current
//! occupied sites. The set size grows by exactly one per period; the object
//! of interest is the evolution of the gaps.
//!
//! Gaps carry a new/old label propagated by the `(A, I)` rules: a deletion
//! creates a new gap unless the removed site was adjacent to an old gap, and
//! any merge involving an old gap stays old. Two stepping backends are
//! provided: a fast one that enumerates candidate sites in plain increasing
//! order, and a faithful one that reproduces the exact category enumeration
//! used by the coupling constructions. Both have the same per-step marginal
//! distribution (uniform over the candidate set); only the map from a uniform
//! draw to a site differs.

mod chain;
mod families;
mod observables;
mod site_set;
mod stopping;

pub use chain::{
    index_from_uniform, proximity_sets, run_model, Backend, LabeledChain, ModelConfig, StepKind,
    StepProximity, StepRecord,
};
pub use families::{h, in_family_g, in_family_s};
pub use observables::{PeriodObservables, Trace, TRACE_HEADER};
pub use site_set::{gap_statistics, Gap, GapLabeling, SiteSet1D};
pub use stopping::{stopping_time_scan, ScanHit, StoppingRule};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Lattice1dError {
    #[error("site set must be nonempty")]
    EmptySet,
    #[error("cannot delete from a singleton set")]
    SingletonDeletion,
    #[error("gap label index {0} exceeds gap count {1}")]
    LabelOutOfRange(usize, usize),
    #[error("h(n) requires n > e, got {0}")]
    HOutOfDomain(f64),
    #[error("uniform stream exhausted")]
    StreamExhausted,
    #[error("K must be at least 2, got {0}")]
    BadK(u32),
    #[error("stopping rule needs per-step records absent from this trace")]
    MissingStepData,
}
