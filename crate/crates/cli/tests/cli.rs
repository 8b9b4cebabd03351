use std::path::Path;
use std::process::Command;

use ansps::direction::SpectralRule;
use ansps::linesearch::NonmonotoneRule;
use ansps::problems::SyntheticSpec;
use ansps::sampling::SampleStrategy;
use ansps::SolverConfig;
use ansps_cli::csvio::{read_trace_file, write_trace_file};
use ansps_cli::error::CliError;
use ansps_cli::experiment::{
    cmd_compare, cmd_run, cmd_sweep, ExperimentSpec, ProblemSource, ReferenceSource, TargetGap,
};

fn spec(out: &Path, seeds: Vec<u64>) -> ExperimentSpec {
    ExperimentSpec {
        source: ProblemSource::Synthetic(SyntheticSpec::new(2, 4, 3)),
        delta: 10.0,
        strategies: vec![SampleStrategy::adaptive()],
        spectral: vec![SpectralRule::Abb],
        nonmonotone: vec![NonmonotoneRule::Ada],
        seeds,
        base: SolverConfig {
            max_iterations: 100,
            ..SolverConfig::default()
        },
        out_dir: out.to_path_buf(),
    }
}

#[test]
fn run_writes_one_trace_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let out = cmd_run(&spec(dir.path(), vec![0, 1])).unwrap();
    assert_eq!(out.files.len(), 2);
    for f in &out.files {
        let rows = read_trace_file(f).unwrap();
        assert_eq!(rows.len(), 101);
        assert_eq!(rows[0].k, 0);
        assert_eq!(rows[0].alpha_k, 1.0);
    }
}

#[test]
fn rerun_is_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ra = cmd_run(&spec(a.path(), vec![7])).unwrap();
    let rb = cmd_run(&spec(b.path(), vec![7])).unwrap();
    let fa = std::fs::read(&ra.files[0]).unwrap();
    let fb = std::fs::read(&rb.files[0]).unwrap();
    assert_eq!(fa, fb);
}

#[test]
fn trace_round_trips_through_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = cmd_run(&spec(dir.path(), vec![0])).unwrap();
    let rows = &out.runs[0].trace.rows;
    let path = dir.path().join("copy.csv");
    write_trace_file(&path, rows).unwrap();
    assert_eq!(&read_trace_file(&path).unwrap(), rows);
}

#[test]
fn compare_with_infinite_gap_hits_at_first_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = cmd_compare(&spec(dir.path(), vec![0]), TargetGap::Absolute(f64::INFINITY)).unwrap();
    assert_eq!(out.table.rows.len(), 1);
    assert_eq!(out.table.reference, ReferenceSource::Grid);
    assert_eq!(out.table.rows[0].fev_to_target, Some(out.runs[0].trace.rows[0].fev_cum));
    assert!(dir.path().join("compare.csv").exists());
}

#[test]
fn sweep_marks_argmin_per_strategy() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = spec(dir.path(), vec![0]);
    s.strategies = vec![SampleStrategy::adaptive(), SampleStrategy::Full];
    s.spectral = vec![SpectralRule::Bb1, SpectralRule::Bb2];
    s.nonmonotone = vec![NonmonotoneRule::Mon, NonmonotoneRule::Ada];
    let out = cmd_sweep(&s, TargetGap::Absolute(1e-2)).unwrap();
    let csvs = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(csvs, 8 + 1);
    assert!(dir.path().join("summary.csv").exists());
    for (name, idx) in &out.best {
        let best = &out.table.rows[*idx];
        assert_eq!(best.cell.strategy.name(), *name);
        for r in out.table.rows.iter().filter(|r| r.cell.strategy.name() == *name) {
            match (best.fev_to_target, r.fev_to_target) {
                (Some(b), Some(o)) => assert!(b <= o),
                (None, Some(_)) => panic!("unreached row ranked above a reached one"),
                _ => {}
            }
        }
    }
}

#[test]
fn empty_rule_list_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = spec(dir.path(), vec![0]);
    s.spectral.clear();
    let err = cmd_sweep(&s, TargetGap::Absolute(1e-2)).unwrap_err();
    assert!(matches!(err, CliError::Usage(_)));
    assert_eq!(err.exit_code(), 1);
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ansps"))
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = bin()
        .args(["run", "--synthetic", "2,4,1", "--max-iters", "10", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(ok.code(), Some(0));

    let bad_flag = bin().args(["run", "--no-such-flag"]).status().unwrap();
    assert_eq!(bad_flag.code(), Some(1));

    let missing = bin()
        .args(["run", "--data"])
        .arg(dir.path().join("missing.svm"))
        .arg("--out")
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(missing.code(), Some(2));

    let help = bin().arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}
