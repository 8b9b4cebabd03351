//! Command-line experiment harness for the `ansps` solver.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod csvio;
pub mod error;
pub mod experiment;
pub mod parse;

pub use error::CliError;
pub use experiment::{
    cmd_compare, cmd_run, cmd_sweep, Cell, CompareTable, ExperimentSpec, ProblemSource, TargetGap,
};
