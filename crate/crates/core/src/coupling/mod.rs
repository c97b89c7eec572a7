//! Adapted stream-selection machinery.
//!
//! The constructions here all follow one scheme: a new sequence of draws is
//! pasted together from two independent uniform streams, the decision which
//! stream supplies the next block depending only on draws already revealed.
//! Under that adaptedness condition the derived sequence is again i.i.d.
//! uniform — the module enforces the condition dynamically with a revelation
//! ledger, since it cannot be checked syntactically.
//!
//! On top of the combinator sit the observables used by the 1-D gap
//! arguments: excursion and K-decrease segmentations, the dominating random
//! walk, the proximity-count process with its increase/decrease times, and
//! d-/a-success marks.

mod observables;
mod segmentation;
mod selection;
mod walks;

pub use observables::{gamma_series, success_marks, GammaSeries, SuccessKind};
pub use segmentation::{
    excursion_decomposition, k_decrease_decomposition, Segment, SegmentKind, Segmentation,
};
pub use selection::{
    derive_stream, AfterHighPolicy, AlternatePolicy, ConstantPolicy, ParityPolicy, PeekingPolicy,
    RevealedDraws, SelectionPolicy, Source,
};
pub use walks::{dominating_walk, overshoot_probability_mc, OvershootResult};

pub use crate::stats::{uniformity_tests, UniformityReport};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CouplingError {
    #[error("policy inspected an unrevealed draw: {0}")]
    AdaptednessViolation(String),
    #[error("streams must be independent (distinct seed/stream id pairs)")]
    StreamsNotDistinct,
    #[error("policy requested zero draws")]
    EmptyRequest,
    #[error("step probability {0} is outside (0,1)")]
    BadStepProbability(f64),
    #[error("per-step log lacks gap labeling data")]
    MissingLabeling,
}
