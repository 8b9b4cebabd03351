//! Exhaustive grid search, used as an independent reference optimum for
//! tiny problems.

use super::hinge::HingeProblem;
use crate::error::{Error, Result};
use crate::region::FeasibleRegion;

#[derive(Debug, Clone, PartialEq)]
pub struct GridOptimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub points: usize,
}

fn axis(lo: f64, hi: f64, resolution: f64) -> Vec<f64> {
    let steps = ((hi - lo) / resolution).floor() as usize;
    let mut pts: Vec<f64> = (0..=steps).map(|i| lo + i as f64 * resolution).collect();
    if hi - pts[pts.len() - 1] > 1e-12 * resolution.max(hi.abs()) {
        pts.push(hi);
    }
    pts
}

/// Scans the region's bounding box with spacing `resolution` (endpoints
/// included), projects each grid point onto the region and returns the
/// first point with the smallest full-sample objective.
pub fn grid_search_optimum(problem: &HingeProblem, resolution: f64) -> Result<GridOptimum> {
    let n = problem.dim();
    if n > 3 {
        return Err(Error::Unsupported(format!(
            "grid search is limited to n <= 3, got n = {n}"
        )));
    }
    if !(resolution > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "grid resolution must be positive, got {resolution}"
        )));
    }
    let region = problem.region();
    if !matches!(
        region,
        FeasibleRegion::L2Ball { .. } | FeasibleRegion::Box { .. }
    ) {
        return Err(Error::Unsupported(
            "grid search needs a ball or box region".into(),
        ));
    }
    let (lo, hi) = region
        .bounding_box(n)
        .ok_or_else(|| Error::Unsupported("grid search needs a bounded region".into()))?;
    let axes: Vec<Vec<f64>> = lo
        .iter()
        .zip(&hi)
        .map(|(l, h)| axis(*l, *h, resolution))
        .collect();

    let ds = problem.dataset();
    // rows pre-multiplied by their labels, stored contiguously
    let signed: Vec<f64> = ds
        .rows()
        .iter()
        .zip(ds.labels())
        .flat_map(|(r, z)| r.to_dense(n).into_iter().map(move |v| v * z))
        .collect();
    let inv_n = 1.0 / ds.len() as f64;
    let delta = problem.delta();
    let eval = |x: &[f64]| -> f64 {
        let loss: f64 = signed
            .chunks_exact(n)
            .map(|w| (1.0 - w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>()).max(0.0))
            .sum();
        delta * x.iter().map(|v| v * v).sum::<f64>() + loss * inv_n
    };

    let mut best = GridOptimum {
        x: Vec::new(),
        f: f64::INFINITY,
        points: 0,
    };
    let mut counter = vec![0usize; n];
    let mut point = vec![0.0; n];
    'scan: loop {
        for d in 0..n {
            point[d] = axes[d][counter[d]];
        }
        region.project_in_place(&mut point);
        let f = eval(&point);
        best.points += 1;
        if f < best.f {
            best.f = f;
            best.x.clone_from(&point);
        }
        // odometer increment, last axis fastest
        let mut d = n;
        loop {
            if d == 0 {
                break 'scan;
            }
            d -= 1;
            counter[d] += 1;
            if counter[d] < axes[d].len() {
                break;
            }
            counter[d] = 0;
        }
    }
    Ok(best)
}
