//! Closed convex feasible regions with exact Euclidean projection.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{check_dim, check_finite, distance, norm};

/// A closed convex set admitting an exact projection.
#[derive(Debug, Clone, PartialEq)]
pub enum FeasibleRegion {
    /// `{x : ‖x‖ ≤ radius}`
    L2Ball { radius: f64 },
    /// `{x : lo ≤ x ≤ hi}` componentwise. Bounds may be infinite.
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// The nonnegative orthant.
    Nonnegative,
    /// No constraint.
    WholeSpace,
}

impl FeasibleRegion {
    pub fn l2_ball(radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidRegion(format!(
                "ball radius must be positive and finite, got {radius}"
            )));
        }
        Ok(FeasibleRegion::L2Ball { radius })
    }

    pub fn boxed(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                found: hi.len(),
            });
        }
        for (i, (l, h)) in lo.iter().zip(&hi).enumerate() {
            if l.is_nan() || h.is_nan() || l > h {
                return Err(Error::InvalidRegion(format!(
                    "box bounds violate lo <= hi at component {i}: [{l}, {h}]"
                )));
            }
        }
        Ok(FeasibleRegion::Box { lo, hi })
    }

    /// Fixed dimension of the region, if it has one.
    pub fn dim(&self) -> Option<usize> {
        match self {
            FeasibleRegion::Box { lo, .. } => Some(lo.len()),
            _ => None,
        }
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if let Some(n) = self.dim() {
            check_dim(n, x)?;
        }
        check_finite("projection input", x)
    }

    /// Axis-aligned bounding box `[lo, hi]` in dimension `n`, when bounded.
    pub fn bounding_box(&self, n: usize) -> Option<(Vec<f64>, Vec<f64>)> {
        match self {
            FeasibleRegion::L2Ball { radius } => Some((vec![-radius; n], vec![*radius; n])),
            FeasibleRegion::Box { lo, hi } => {
                if lo.iter().chain(hi).all(|v| v.is_finite()) {
                    Some((lo.clone(), hi.clone()))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Draws a point of the region. For the ball: uniform direction times
    /// `radius * U^(1/n)`; for a bounded box: uniform per component;
    /// otherwise a standard Gaussian projected onto the region.
    pub fn random_point<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        match self {
            FeasibleRegion::L2Ball { radius } => {
                let mut dir: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
                let len = norm(&dir);
                let u: f64 = rng.random();
                let r = radius * u.powf(1.0 / n as f64);
                if len > 0.0 {
                    dir.iter_mut().for_each(|d| *d *= r / len);
                }
                dir
            }
            FeasibleRegion::Box { lo, hi } if lo.iter().chain(hi).all(|v| v.is_finite()) => lo
                .iter()
                .zip(hi)
                .map(|(l, h)| {
                    let u: f64 = rng.random();
                    (l + u * (h - l)).clamp(*l, *h)
                })
                .collect(),
            _ => {
                let g: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
                self.project_unchecked(&g)
            }
        }
    }

    fn project_unchecked(&self, x: &[f64]) -> Vec<f64> {
        let mut out = x.to_vec();
        self.project_in_place(&mut out);
        out
    }

    /// Projection without input checks; `x.len()` must match the region.
    pub(crate) fn project_in_place(&self, x: &mut [f64]) {
        match self {
            FeasibleRegion::L2Ball { radius } => {
                let len = norm(x);
                if len > *radius {
                    let t = radius / len;
                    x.iter_mut().for_each(|v| *v *= t);
                }
            }
            FeasibleRegion::Box { lo, hi } => {
                for (v, (l, h)) in x.iter_mut().zip(lo.iter().zip(hi)) {
                    *v = v.clamp(*l, *h);
                }
            }
            FeasibleRegion::Nonnegative => x.iter_mut().for_each(|v| *v = v.max(0.0)),
            FeasibleRegion::WholeSpace => {}
        }
    }
}

/// Euclidean projection of `x` onto `region`.
pub fn project(region: &FeasibleRegion, x: &[f64]) -> Result<Vec<f64>> {
    region.check_input(x)?;
    Ok(region.project_unchecked(x))
}

/// `‖x − P(x)‖`.
pub fn distance_to_region(region: &FeasibleRegion, x: &[f64]) -> Result<f64> {
    let p = project(region, x)?;
    Ok(distance(x, &p))
}
