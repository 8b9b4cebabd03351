//! `f_I(x) = δ‖x‖² + (1/|I|) Σ_{i∈I} max{0, 1 − z_i xᵀw_i}`.
//!
//! At a kink (`1 − z_i xᵀw_i = 0`) the hinge term contributes the zero
//! subgradient.

use std::cell::RefCell;

use super::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg::{check_dim, check_finite, dot};
use crate::oracle::{FevMeter, SaaOracle};
use crate::region::FeasibleRegion;

#[derive(Debug, Clone, PartialEq)]
pub struct HingeProblem {
    dataset: Dataset,
    delta: f64,
    region: FeasibleRegion,
}

impl HingeProblem {
    /// Radius of the default ball when `delta == 0`.
    pub const UNREGULARIZED_RADIUS: f64 = 0.316_227_766_016_837_94; // √0.1

    /// Problem on the default ball: radius `1/√δ`, or `√0.1` when `δ = 0`.
    pub fn new(dataset: Dataset, delta: f64) -> Result<Self> {
        let radius = if delta > 0.0 {
            1.0 / delta.sqrt()
        } else {
            Self::UNREGULARIZED_RADIUS
        };
        Self::with_region(dataset, delta, FeasibleRegion::l2_ball(radius)?)
    }

    pub fn with_region(dataset: Dataset, delta: f64, region: FeasibleRegion) -> Result<Self> {
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "regularization weight must be finite and >= 0, got {delta}"
            )));
        }
        if let Some(n) = region.dim() {
            if n != dataset.n_features() {
                return Err(Error::DimensionMismatch {
                    expected: dataset.n_features(),
                    found: n,
                });
            }
        }
        Ok(HingeProblem {
            dataset,
            delta,
            region,
        })
    }

    pub fn dataset(&self) -> &Dataset {
        &self.dataset
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn region(&self) -> &FeasibleRegion {
        &self.region
    }

    pub fn dim(&self) -> usize {
        self.dataset.n_features()
    }

    pub fn len(&self) -> usize {
        self.dataset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dataset.is_empty()
    }

    /// All sample indices in order.
    pub fn all_indices(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }

    /// Unmetered full-sample objective.
    pub fn full_value(&self, x: &[f64]) -> Result<f64> {
        hinge_value(self, &self.all_indices(), x)
    }

    fn check(&self, indices: &[usize], x: &[f64]) -> Result<()> {
        if indices.is_empty() {
            return Err(Error::EmptyIndexSet);
        }
        check_dim(self.dim(), x)?;
        let len = self.len();
        if let Some(&index) = indices.iter().find(|&&i| i >= len) {
            return Err(Error::IndexOutOfRange { index, len });
        }
        Ok(())
    }

    /// `z_i xᵀw_i` for each `i` in `indices`.
    fn margins(&self, indices: &[usize], x: &[f64]) -> Vec<f64> {
        indices
            .iter()
            .map(|&i| {
                let (row, z) = self.dataset.row(i);
                z * row.dot(x)
            })
            .collect()
    }

    fn value_from_margins(&self, x: &[f64], margins: &[f64]) -> f64 {
        let loss: f64 = margins.iter().map(|m| (1.0 - m).max(0.0)).sum();
        self.delta * dot(x, x) + loss / margins.len() as f64
    }

    fn subgradient_from_margins(&self, indices: &[usize], x: &[f64], margins: &[f64]) -> Vec<f64> {
        let mut g: Vec<f64> = x.iter().map(|v| 2.0 * self.delta * v).collect();
        let w = 1.0 / indices.len() as f64;
        for (&i, m) in indices.iter().zip(margins) {
            if 1.0 - m > 0.0 {
                let (row, z) = self.dataset.row(i);
                row.add_scaled_to(-z * w, &mut g);
            }
        }
        g
    }
}

/// Unmetered SAA value over `indices`.
pub fn hinge_value(problem: &HingeProblem, indices: &[usize], x: &[f64]) -> Result<f64> {
    problem.check(indices, x)?;
    let m = problem.margins(indices, x);
    Ok(problem.value_from_margins(x, &m))
}

/// Unmetered SAA subgradient over `indices`.
pub fn hinge_subgradient(problem: &HingeProblem, indices: &[usize], x: &[f64]) -> Result<Vec<f64>> {
    problem.check(indices, x)?;
    let m = problem.margins(indices, x);
    Ok(problem.subgradient_from_margins(indices, x, &m))
}

#[derive(Debug, Clone)]
struct MarginCache {
    x: Vec<f64>,
    indices: Vec<usize>,
    margins: Vec<f64>,
}

/// Metered oracle over a [`HingeProblem`].
///
/// Each cache miss charges `|I|` scalar products. The margins of the last
/// `(x, I)` pair are memoized so a value and a subgradient at the same
/// point cost `|I|` once.
#[derive(Debug)]
pub struct HingeOracle<'a> {
    problem: &'a HingeProblem,
    meter: FevMeter,
    cache: RefCell<Option<MarginCache>>,
}

impl<'a> HingeOracle<'a> {
    pub fn new(problem: &'a HingeProblem) -> Self {
        HingeOracle {
            problem,
            meter: FevMeter::new(),
            cache: RefCell::new(None),
        }
    }

    pub fn problem(&self) -> &HingeProblem {
        self.problem
    }

    fn with_margins<T>(
        &self,
        x: &[f64],
        indices: &[usize],
        f: impl FnOnce(&[f64]) -> T,
    ) -> Result<T> {
        check_finite("oracle input", x)?;
        let mut cache = self.cache.borrow_mut();
        let hit = cache
            .as_ref()
            .is_some_and(|c| c.x == x && c.indices == indices);
        if !hit {
            self.problem.check(indices, x)?;
            let margins = self.problem.margins(indices, x);
            self.meter.charge(indices.len());
            *cache = Some(MarginCache {
                x: x.to_vec(),
                indices: indices.to_vec(),
                margins,
            });
        }
        Ok(f(&cache.as_ref().expect("cache filled").margins))
    }
}

impl SaaOracle for HingeOracle<'_> {
    fn dim(&self) -> usize {
        self.problem.dim()
    }

    fn full_size(&self) -> usize {
        self.problem.len()
    }

    fn value(&self, x: &[f64], indices: &[usize]) -> Result<f64> {
        self.with_margins(x, indices, |m| self.problem.value_from_margins(x, m))
    }

    fn subgradient(&self, x: &[f64], indices: &[usize]) -> Result<Vec<f64>> {
        self.with_margins(x, indices, |m| {
            self.problem.subgradient_from_margins(indices, x, m)
        })
    }

    fn value_and_subgradient(&self, x: &[f64], indices: &[usize]) -> Result<(f64, Vec<f64>)> {
        self.with_margins(x, indices, |m| {
            (
                self.problem.value_from_margins(x, m),
                self.problem.subgradient_from_margins(indices, x, m),
            )
        })
    }

    fn diagnostic_value(&self, x: &[f64]) -> Result<f64> {
        self.problem.full_value(x)
    }

    fn fev(&self) -> u64 {
        self.meter.get()
    }
}
