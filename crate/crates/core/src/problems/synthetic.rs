//! Planted-hyperplane classification data.
//!
//! Recipe, all draws from one ChaCha8 stream seeded by `seed`:
//! 1. a normal `u` with i.i.d. standard Gaussian entries, scaled to unit length;
//! 2. for each sample, a feature row `w_i` with i.i.d. Gaussian entries of
//!    standard deviation `feature_scale`;
//! 3. the label `z_i = sign(uᵀw_i / feature_scale + ε_i / margin)` with `ε_i` standard
//!    Gaussian and `sign(0) = +1`.
//!
//! `margin = ∞` gives noise-free labels, separable by `u`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::dataset::{Dataset, SparseRow};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub n_features: usize,
    pub n_samples: usize,
    /// Inverse label-noise scale.
    pub margin: f64,
    /// Standard deviation of the feature entries.
    pub feature_scale: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub const DEFAULT_MARGIN: f64 = 2.0;
    pub const DEFAULT_FEATURE_SCALE: f64 = 5.0;

    pub fn new(n_features: usize, n_samples: usize, seed: u64) -> Self {
        SyntheticSpec {
            n_features,
            n_samples,
            margin: Self::DEFAULT_MARGIN,
            feature_scale: Self::DEFAULT_FEATURE_SCALE,
            seed,
        }
    }
}

/// Generates the dataset and returns it with the planted unit normal.
pub fn make_synthetic(spec: &SyntheticSpec) -> Result<(Dataset, Vec<f64>)> {
    let SyntheticSpec {
        n_features: n,
        n_samples,
        margin,
        feature_scale,
        seed,
    } = *spec;
    if n == 0 || n_samples == 0 {
        return Err(Error::InvalidConfig(
            "synthetic data needs n >= 1 and N >= 1".into(),
        ));
    }
    if !(margin > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "synthetic margin must be positive, got {margin}"
        )));
    }
    if !(feature_scale > 0.0) || !feature_scale.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "synthetic feature scale must be positive, got {feature_scale}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gauss = || -> f64 { StandardNormal.sample(&mut rng) };

    let mut normal: Vec<f64> = (0..n).map(|_| gauss()).collect();
    let len = crate::linalg::norm(&normal);
    if len > 0.0 {
        normal.iter_mut().for_each(|v| *v /= len);
    } else {
        normal[0] = 1.0;
    }

    let noise_scale = 1.0 / margin;
    let mut rows = Vec::with_capacity(n_samples);
    let mut labels = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let w: Vec<f64> = (0..n).map(|_| feature_scale * gauss()).collect();
        let eps = gauss();
        let score = crate::linalg::dot(&normal, &w) / feature_scale + noise_scale * eps;
        labels.push(if score >= 0.0 { 1.0 } else { -1.0 });
        rows.push(SparseRow::from_dense(&w));
    }
    Ok((Dataset::new(n, rows, labels)?, normal))
}
