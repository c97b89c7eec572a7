use super::chain::StepRecord;
use serde::{Deserialize, Serialize};

/// Exact column order of the trace CSV.
pub const TRACE_HEADER: &str = "period,size,L,G,G2,LI,GI,G2I,C,C2,CI,CI2,Ralpha,Rdelta";

/// End-of-period snapshot of every tracked statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodObservables {
    pub period: u64,
    pub size: u64,
    pub l: i64,
    pub g: u32,
    pub g2: u32,
    pub li: i64,
    pub gi: u32,
    pub g2i: u32,
    pub c: u32,
    pub c2: u32,
    pub ci: u32,
    pub ci2: u32,
    pub r_alpha: u32,
    pub r_delta: u32,
}

impl PeriodObservables {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.period,
            self.size,
            self.l,
            self.g,
            self.g2,
            self.li,
            self.gi,
            self.g2i,
            self.c,
            self.c2,
            self.ci,
            self.ci2,
            self.r_alpha,
            self.r_delta
        )
    }
}

/// A full run: one row per period (row 0 is the initial state) plus the
/// optional per-step log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub k: u32,
    pub rows: Vec<PeriodObservables>,
    pub steps: Option<Vec<StepRecord>>,
}

impl Trace {
    pub fn final_row(&self) -> &PeriodObservables {
        self.rows.last().expect("trace always holds the initial row")
    }
}
