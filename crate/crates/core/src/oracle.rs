//! The sample-average-approximation oracle contract.
//!
//! An oracle evaluates `f_I(x) = (1/|I|) Σ_{i∈I} f_i(x)` and one of its
//! subgradients for an index set `I ⊆ {0, …, N_max − 1}`. Every oracle owns
//! a scalar-product meter (FEV): cost is measured as the number of data
//! products `xᵀw_i` spent so far.

use std::cell::Cell;

use crate::error::Result;

pub trait SaaOracle {
    /// Dimension of the decision variable.
    fn dim(&self) -> usize;

    /// Size of the full sample.
    fn full_size(&self) -> usize;

    fn value(&self, x: &[f64], indices: &[usize]) -> Result<f64>;

    fn subgradient(&self, x: &[f64], indices: &[usize]) -> Result<Vec<f64>>;

    /// Value and subgradient from one pass over the data.
    fn value_and_subgradient(&self, x: &[f64], indices: &[usize]) -> Result<(f64, Vec<f64>)>;

    /// Full-sample objective for diagnostics. Not charged to the meter.
    fn diagnostic_value(&self, x: &[f64]) -> Result<f64>;

    /// Scalar products charged so far.
    fn fev(&self) -> u64;
}

/// Single-threaded scalar-product counter.
#[derive(Debug, Default, Clone)]
pub struct FevMeter {
    count: Cell<u64>,
}

impl FevMeter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn charge(&self, products: usize) {
        self.count.set(self.count.get() + products as u64);
    }

    pub fn get(&self) -> u64 {
        self.count.get()
    }
}
