//! The hinge-loss finite-sum problem family and its data sources.

mod dataset;
mod grid;
mod hinge;
mod libsvm;
mod synthetic;

pub use dataset::{Dataset, SparseRow};
pub use grid::{grid_search_optimum, GridOptimum};
pub use hinge::{hinge_subgradient, hinge_value, HingeOracle, HingeProblem};
pub use libsvm::{parse_libsvm, read_libsvm_file, write_libsvm};
pub use synthetic::{make_synthetic, SyntheticSpec};
