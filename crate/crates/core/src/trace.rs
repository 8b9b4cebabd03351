//! Per-iteration records of a solver run.

use serde::{Deserialize, Serialize};

/// One CSV row of a run: the quantities of iteration `k`.
///
/// `fev_cum` is the number of scalar products spent to reach `x_k`
/// (including the evaluation of `f_saa`). `f_full` is only filled on the
/// diagnostic stride and is never charged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub k: usize,
    #[serde(rename = "N_k")]
    pub n_k: usize,
    pub alpha_k: f64,
    pub zeta_k: f64,
    pub theta_k: f64,
    pub fev_cum: u64,
    pub f_saa: f64,
    pub f_full: Option<f64>,
}

/// Column order of the trace CSV.
pub const TRACE_HEADER: [&str; 8] = [
    "k", "N_k", "alpha_k", "zeta_k", "theta_k", "fev_cum", "f_saa", "f_full",
];

/// Quantities of an iteration that are not part of the CSV schema but are
/// needed to audit the run.
#[derive(Debug, Clone, PartialEq)]
pub struct StepDiagnostics {
    pub k: usize,
    /// Nonmonotone reference value `F_k`.
    pub reference_value: f64,
    pub q_k: f64,
    pub v_norm: f64,
    pub p_norm: f64,
    /// Line-search candidates (ascending); empty at `k = 0`.
    pub candidates: Vec<f64>,
    /// `(step, f_saa at x + step·p)` in evaluation order.
    pub evaluations: Vec<(f64, f64)>,
    pub accepted_index: Option<usize>,
    /// SAA error measure `h(N_k)` at the time of the sample-size test.
    pub h_k: f64,
    pub n_next: usize,
    /// Scalar products charged during this iteration.
    pub fev_step: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunStatus {
    IterationLimit,
    FevBudget,
    FullSampleReached,
    Aborted { k: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub rows: Vec<TraceRow>,
    pub diagnostics: Vec<StepDiagnostics>,
    pub status: RunStatus,
    pub final_x: Vec<f64>,
    /// Full-sample objective at `final_x` (uncharged).
    pub final_f_full: f64,
    pub total_fev: u64,
    pub n_initial: usize,
    pub n_max: usize,
}

impl RunTrace {
    /// First iteration whose sample is the full sample.
    pub fn full_sample_iteration(&self) -> Option<usize> {
        self.rows.iter().find(|r| r.n_k == self.n_max).map(|r| r.k)
    }

    /// FEV of the first row whose `f_full` is at most `target`.
    pub fn fev_to_target(&self, target: f64) -> Option<u64> {
        self.rows
            .iter()
            .find(|r| r.f_full.is_some_and(|f| f <= target))
            .map(|r| r.fev_cum)
    }

    /// Smallest recorded full objective, including the final iterate.
    pub fn best_f_full(&self) -> f64 {
        self.rows
            .iter()
            .filter_map(|r| r.f_full)
            .fold(self.final_f_full, f64::min)
    }

    pub fn is_aborted(&self) -> bool {
        matches!(self.status, RunStatus::Aborted { .. })
    }
}
