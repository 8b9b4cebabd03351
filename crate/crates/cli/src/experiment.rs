//! Experiment cells, batch execution and FEV-to-target summaries.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use ansps::direction::SpectralRule;
use ansps::linesearch::NonmonotoneRule;
use ansps::problems::{grid_search_optimum, make_synthetic, read_libsvm_file, HingeProblem, SyntheticSpec};
use ansps::sampling::SampleStrategy;
use ansps::{RunStatus, RunTrace, SolverConfig};

use crate::csvio::write_trace_file;
use crate::error::CliError;

/// Grid resolution of the reference optimum for `n <= 3`.
pub const GRID_RESOLUTION: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSource {
    Libsvm(PathBuf),
    Synthetic(SyntheticSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub source: ProblemSource,
    pub delta: f64,
    pub strategies: Vec<SampleStrategy>,
    pub spectral: Vec<SpectralRule>,
    pub nonmonotone: Vec<NonmonotoneRule>,
    pub seeds: Vec<u64>,
    /// Shared solver parameters; strategy, rules and seed are overridden per cell.
    pub base: SolverConfig,
    pub out_dir: PathBuf,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.strategies.is_empty() {
            return Err(CliError::Usage("strategy list is empty".into()));
        }
        if self.spectral.is_empty() {
            return Err(CliError::Usage("spectral rule list is empty".into()));
        }
        if self.nonmonotone.is_empty() {
            return Err(CliError::Usage("nonmonotone rule list is empty".into()));
        }
        if self.seeds.is_empty() {
            return Err(CliError::Usage("seed list is empty".into()));
        }
        if !(self.delta >= 0.0) || !self.delta.is_finite() {
            return Err(CliError::Usage(format!("delta must be >= 0, got {}", self.delta)));
        }
        self.base
            .validate()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(())
    }

    /// Cartesian product strategy × spectral × nonmonotone × seed.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &strategy in &self.strategies {
            for &spectral in &self.spectral {
                for &nonmonotone in &self.nonmonotone {
                    for &seed in &self.seeds {
                        out.push(Cell {
                            strategy,
                            spectral,
                            nonmonotone,
                            seed,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn load_problem(&self) -> Result<HingeProblem, CliError> {
        let dataset = match &self.source {
            ProblemSource::Libsvm(path) => read_libsvm_file(path, None)?,
            ProblemSource::Synthetic(s) => make_synthetic(s)?.0,
        };
        Ok(HingeProblem::new(dataset, self.delta)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub strategy: SampleStrategy,
    pub spectral: SpectralRule,
    pub nonmonotone: NonmonotoneRule,
    pub seed: u64,
}

impl Cell {
    pub fn label(&self) -> String {
        format!(
            "{}-{}-{}",
            self.strategy.name(),
            self.spectral.name(),
            self.nonmonotone.name()
        )
    }

    pub fn file_name(&self) -> String {
        format!("{}-seed{}.csv", self.label(), self.seed)
    }

    pub fn config(&self, base: &SolverConfig) -> SolverConfig {
        SolverConfig {
            strategy: self.strategy,
            spectral: self.spectral,
            nonmonotone: self.nonmonotone,
            seed: self.seed,
            ..base.clone()
        }
    }
}

#[derive(Debug, Clone)]
pub struct CellRun {
    pub cell: Cell,
    pub trace: RunTrace,
}

/// Runs every cell (in parallel), returned in cell order.
pub fn run_cells(
    spec: &ExperimentSpec,
    problem: &HingeProblem,
    cells: &[Cell],
) -> Result<Vec<CellRun>, CliError> {
    cells
        .par_iter()
        .map(|cell| {
            let trace = ansps::run(&cell.config(&spec.base), problem)?;
            Ok(CellRun { cell: *cell, trace })
        })
        .collect()
}

fn prepare_out_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))
}

fn write_traces(dir: &Path, runs: &[CellRun]) -> Result<Vec<PathBuf>, CliError> {
    runs.iter()
        .map(|r| {
            let path = dir.join(r.cell.file_name());
            write_trace_file(&path, &r.trace.rows)?;
            Ok(path)
        })
        .collect()
}

fn check_aborts(runs: &[CellRun]) -> Result<(), CliError> {
    let aborted: Vec<String> = runs
        .iter()
        .filter_map(|r| match &r.trace.status {
            RunStatus::Aborted { k, reason } => Some(format!(
                "{} seed {} at k={k}: {reason}",
                r.cell.label(),
                r.cell.seed
            )),
            _ => None,
        })
        .collect();
    if aborted.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numeric(aborted.join("; ")))
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub files: Vec<PathBuf>,
    pub runs: Vec<CellRun>,
}

/// Runs every cell and writes one trace CSV per cell.
pub fn cmd_run(spec: &ExperimentSpec) -> Result<RunOutput, CliError> {
    spec.validate()?;
    let problem = spec.load_problem()?;
    prepare_out_dir(&spec.out_dir)?;
    let runs = run_cells(spec, &problem, &spec.cells())?;
    let files = write_traces(&spec.out_dir, &runs)?;
    check_aborts(&runs)?;
    Ok(RunOutput { files, runs })
}

/// Target level `f_ref + gap`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TargetGap {
    Absolute(f64),
    /// `frac · |f_ref|`
    Relative(f64),
}

impl TargetGap {
    pub fn target(&self, f_ref: f64) -> f64 {
        match *self {
            TargetGap::Absolute(g) => f_ref + g,
            TargetGap::Relative(r) => f_ref + r * f_ref.abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReferenceSource {
    /// Brute-force grid optimum (`n <= 3`).
    Grid,
    /// Best full objective seen across all cells.
    BestObserved,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub cell: Cell,
    pub fev_to_target: Option<u64>,
    pub best_f_full: f64,
    pub final_f_full: f64,
    pub total_fev: u64,
    pub iterations: usize,
    pub status: RunStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareTable {
    pub f_ref: f64,
    pub reference: ReferenceSource,
    pub target: f64,
    /// Ranked: reached rows by FEV, then unreached rows by best objective.
    pub rows: Vec<CompareRow>,
}

impl CompareTable {
    /// Index of the best row for `strategy` in [`CompareTable::rows`].
    pub fn best_for(&self, strategy: &str) -> Option<usize> {
        self.rows
            .iter()
            .position(|r| r.cell.strategy.name() == strategy)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let src = match self.reference {
            ReferenceSource::Grid => "grid",
            ReferenceSource::BestObserved => "best observed",
        };
        let _ = writeln!(
            s,
            "f_ref = {:.10} ({src}), target = {:.10}",
            self.f_ref, self.target
        );
        let _ = writeln!(
            s,
            "{:>4}  {:<22} {:>6}  {:>14}  {:>14}  {:>12}",
            "rank", "cell", "seed", "fev_to_target", "best_f_full", "total_fev"
        );
        for (i, r) in self.rows.iter().enumerate() {
            let fev = r
                .fev_to_target
                .map_or_else(|| "not reached".to_string(), |f| f.to_string());
            let _ = writeln!(
                s,
                "{:>4}  {:<22} {:>6}  {:>14}  {:>14.8}  {:>12}",
                i + 1,
                r.cell.label(),
                r.cell.seed,
                fev,
                r.best_f_full,
                r.total_fev
            );
        }
        s
    }

    fn write_csv(&self, path: &Path, mark_best: bool) -> Result<(), CliError> {
        let mut w = csv::Writer::from_path(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        w.write_record([
            "rank",
            "strategy",
            "spectral",
            "nonmonotone",
            "seed",
            "fev_to_target",
            "best_f_full",
            "final_f_full",
            "total_fev",
            "iterations",
            "status",
            "best_for_strategy",
        ])?;
        for (i, r) in self.rows.iter().enumerate() {
            let best = mark_best && self.best_for(r.cell.strategy.name()) == Some(i);
            w.write_record([
                (i + 1).to_string(),
                r.cell.strategy.name().to_string(),
                r.cell.spectral.name().to_string(),
                r.cell.nonmonotone.name().to_string(),
                r.cell.seed.to_string(),
                r.fev_to_target.map_or_else(String::new, |f| f.to_string()),
                r.best_f_full.to_string(),
                r.final_f_full.to_string(),
                r.total_fev.to_string(),
                r.iterations.to_string(),
                status_name(&r.status).to_string(),
                best.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn status_name(s: &RunStatus) -> &'static str {
    match s {
        RunStatus::IterationLimit => "iteration_limit",
        RunStatus::FevBudget => "fev_budget",
        RunStatus::FullSampleReached => "full_sample",
        RunStatus::Aborted { .. } => "aborted",
    }
}

/// Reference optimum: the grid oracle when it applies, otherwise the best
/// full objective observed across `runs`.
pub fn reference_value(problem: &HingeProblem, runs: &[CellRun]) -> (f64, ReferenceSource) {
    if problem.dim() <= 3 {
        if let Ok(g) = grid_search_optimum(problem, GRID_RESOLUTION) {
            return (g.f, ReferenceSource::Grid);
        }
    }
    let best = runs
        .iter()
        .map(|r| r.trace.best_f_full())
        .filter(|f| f.is_finite())
        .fold(f64::INFINITY, f64::min);
    (best, ReferenceSource::BestObserved)
}

/// Ranks `runs` by the FEV at which `f_full` first reaches the target.
pub fn summarize(runs: &[CellRun], f_ref: f64, reference: ReferenceSource, gap: TargetGap) -> CompareTable {
    let target = gap.target(f_ref);
    let mut rows: Vec<CompareRow> = runs
        .iter()
        .map(|r| CompareRow {
            cell: r.cell,
            fev_to_target: r.trace.fev_to_target(target),
            best_f_full: r.trace.best_f_full(),
            final_f_full: r.trace.final_f_full,
            total_fev: r.trace.total_fev,
            iterations: r.trace.rows.len(),
            status: r.trace.status.clone(),
        })
        .collect();
    // stable sort keeps cell order among ties
    rows.sort_by(|a, b| match (a.fev_to_target, b.fev_to_target) {
        (Some(x), Some(y)) => x.cmp(&y),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => a.best_f_full.total_cmp(&b.best_f_full),
    });
    CompareTable {
        f_ref,
        reference,
        target,
        rows,
    }
}

#[derive(Debug, Clone)]
pub struct CompareOutput {
    pub table: CompareTable,
    pub runs: Vec<CellRun>,
}

/// Runs the cells, writes their traces and `compare.csv`, and ranks them.
pub fn cmd_compare(spec: &ExperimentSpec, gap: TargetGap) -> Result<CompareOutput, CliError> {
    spec.validate()?;
    let problem = spec.load_problem()?;
    prepare_out_dir(&spec.out_dir)?;
    let runs = run_cells(spec, &problem, &spec.cells())?;
    write_traces(&spec.out_dir, &runs)?;
    check_aborts(&runs)?;
    let (f_ref, reference) = reference_value(&problem, &runs);
    let table = summarize(&runs, f_ref, reference, gap);
    table.write_csv(&spec.out_dir.join("compare.csv"), false)?;
    Ok(CompareOutput { table, runs })
}

#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub table: CompareTable,
    /// `(strategy name, row index into table.rows)`
    pub best: Vec<(&'static str, usize)>,
    pub runs: Vec<CellRun>,
}

/// Runs the full rule grid for every strategy, writes one trace per cell
/// plus `summary.csv`, and points at the best cell of each strategy.
pub fn cmd_sweep(spec: &ExperimentSpec, gap: TargetGap) -> Result<SweepOutput, CliError> {
    spec.validate()?;
    let problem = spec.load_problem()?;
    prepare_out_dir(&spec.out_dir)?;
    let runs = run_cells(spec, &problem, &spec.cells())?;
    write_traces(&spec.out_dir, &runs)?;
    check_aborts(&runs)?;
    let (f_ref, reference) = reference_value(&problem, &runs);
    let table = summarize(&runs, f_ref, reference, gap);
    table.write_csv(&spec.out_dir.join("summary.csv"), true)?;
    let mut best = Vec::new();
    for s in &spec.strategies {
        if best.iter().any(|(name, _)| *name == s.name()) {
            continue;
        }
        if let Some(i) = table.best_for(s.name()) {
            best.push((s.name(), i));
        }
    }
    Ok(SweepOutput { table, best, runs })
}
