//! Experiment plumbing: configuration files, seeding, trace persistence and
//! the acceptance-experiment drivers.

mod acceptance;
mod config;
mod experiments;
mod io;

pub use acceptance::{run_acceptance, CriterionResult};
pub use config::{config_hash, seed_sequence, ExperimentConfig, RunRecord, SCHEMA_VERSION};
pub use experiments::run_experiment;
pub use io::{
    read_cluster_json, read_steps_jsonl, read_trace_csv, write_ages_csv, write_cluster_json,
    write_dla_trace_csv, write_steps_jsonl, write_trace_csv,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("trace format error in column {column}: expected {expected}, found {found}")]
    TraceHeader { column: usize, expected: String, found: String },
    #[error("malformed {what} on line {line}")]
    Malformed { what: &'static str, line: usize },
    #[error("unknown experiment {0}")]
    UnknownExperiment(String),
    #[error("missing parameter {0}")]
    MissingParameter(&'static str),
    #[error(transparent)]
    Lattice(#[from] crate::lattice1d::Lattice1dError),
    #[error(transparent)]
    Coupling(#[from] crate::coupling::CouplingError),
    #[error(transparent)]
    Ages(#[from] crate::ages::AgesError),
    #[error(transparent)]
    Dla(#[from] crate::dla2d::DlaError),
    #[error(transparent)]
    Surgery(#[from] crate::surgery::SurgeryError),
    #[error(transparent)]
    Stats(#[from] crate::stats::StatsError),
}
