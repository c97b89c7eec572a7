//! The deterministic geometry that forces a new hole into a DLA cluster.
//!
//! Around a cluster `a` sits a closed contour whose lattice points all lie at
//! lattice distance exactly 40 from `a`; from every contour lattice point a
//! geodesic of length 40 descends to the cluster, merged so that paths that
//! touch stay together. A separator scan picks contour points whose
//! geodesics are at least 40 apart in the cluster-avoiding metric, cutting
//! the annulus into patches. Once seven walks enter one patch strictly
//! before attaching ("the lucky patch"), seven attach points next to the
//! middle geodesic, reachable by explicit approach paths, close off a new
//! hole. The map `phi` rewrites the sampled walk paths with out-and-back
//! loops so the modified cluster actually contains those seven points, while
//! every decision depends only on the walk prefixes up to their first entry
//! into `a`.

mod attach;
mod contour;
mod gamma;
mod lucky;
mod patches;
mod phi;
mod separators;
mod verify;

pub use attach::{choose_attach_points, AttachPlan};
pub use contour::{build_contour, build_hat_gamma, Contour, HatGamma};
pub use gamma::{build_gamma_paths, GammaField};
pub use lucky::{lucky_patch, LuckyOutcome};
pub use patches::{build_patch_decomposition, build_patches, Patch, PatchDecomposition};
pub use phi::{
    run_surgery_sample, sample_walk_record, PathAction, SurgeryPlan, SurgerySample, WalkRecord,
};
pub use separators::{constrained_distance, select_separators, Separators};
pub use verify::{verify_patch_geometry, verify_surgery, GeometryReport, SurgeryReport};

use thiserror::Error;

/// Every lattice point of the contour sits at exactly this distance from the
/// cluster, and every descent path has exactly this length.
pub const CONTOUR_DISTANCE: i32 = 40;

/// Number of strictly-before-attach visitors that make a patch lucky.
pub const LUCKY_VISITORS: usize = 7;

#[derive(Debug, Error)]
pub enum SurgeryError {
    #[error("cluster too small for the separator construction (I = {0} < 2)")]
    ConstructionInfeasible(usize),
    #[error("no patch reached {LUCKY_VISITORS} strictly-early visitors within L paths")]
    NoLuckyPatch,
    #[error("construction invariant broken: {0}")]
    ConstructionBug(String),
    #[error("attach case table has no row for this geodesic tail")]
    CaseTableMiss,
    #[error("walk exceeded its step budget")]
    WalkBudget,
    #[error(transparent)]
    Dla(#[from] crate::dla2d::DlaError),
}
