//! Adaptive-sample-size nonmonotone spectral projected subgradient method
//! for convex constrained finite-sum problems, with hinge-loss problems,
//! LIBSVM ingestion and brute-force reference optima for small instances.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod direction;
pub mod error;
pub mod linalg;
pub mod linesearch;
pub mod oracle;
pub mod problems;
pub mod region;
pub mod sampling;
pub mod solver;
pub mod trace;

pub use error::{Error, Result};
pub use oracle::SaaOracle;
pub use problems::{Dataset, HingeProblem};
pub use region::{distance_to_region, project, FeasibleRegion};
pub use solver::{run, ComplexityReport, InitialPoint, SolverConfig};
pub use trace::{RunStatus, RunTrace, TraceRow};
