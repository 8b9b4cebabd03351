//! Nonmonotone Armijo-like search over a predefined step interval.
//!
//! At iteration `k ≥ 1` the step is picked from `m` candidates in
//! `(1/k, ᾱ_k]` with `ᾱ_k = min{1, C2/k}`: the largest candidate with
//! `f(x + αp) ≤ F_k − ηα‖p‖²` wins, otherwise the step is `1/k`.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::linalg::{axpy, dot};

/// Length of the MAX rule's window.
pub const MAX_WINDOW: usize = 6;
/// Weight `η_k` of the CCA recursion.
pub const CCA_ETA: f64 = 0.85;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NonmonotoneRule {
    /// Largest of the last `window` SAA values.
    Max { window: usize },
    /// Convex-combination average `D_k`.
    Cca { eta: f64 },
    /// The current SAA value.
    Mon,
    /// The current SAA value plus `2^{−k}`.
    Ada,
}

impl NonmonotoneRule {
    pub fn max() -> Self {
        NonmonotoneRule::Max { window: MAX_WINDOW }
    }

    pub fn cca() -> Self {
        NonmonotoneRule::Cca { eta: CCA_ETA }
    }

    pub fn name(&self) -> &'static str {
        match self {
            NonmonotoneRule::Max { .. } => "max",
            NonmonotoneRule::Cca { .. } => "cca",
            NonmonotoneRule::Mon => "mon",
            NonmonotoneRule::Ada => "ada",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonmonotoneState {
    rule: NonmonotoneRule,
    k: usize,
    f_current: f64,
    window: VecDeque<f64>,
    cca_d: f64,
    cca_weight: f64,
}

impl NonmonotoneState {
    /// State at `k = 0` with `f_0 = f_{N_0}(x_0)`.
    pub fn new(rule: NonmonotoneRule, f0: f64) -> Result<Self> {
        match rule {
            NonmonotoneRule::Max { window: 0 } => {
                return Err(Error::InvalidConfig("MAX window must be positive".into()))
            }
            NonmonotoneRule::Cca { eta } if !(0.0..=1.0).contains(&eta) => {
                return Err(Error::InvalidConfig(format!(
                    "CCA weight must lie in [0, 1], got {eta}"
                )))
            }
            _ => {}
        }
        Ok(NonmonotoneState {
            rule,
            k: 0,
            f_current: f0,
            window: VecDeque::from([f0]),
            cca_d: f0,
            cca_weight: 1.0,
        })
    }

    pub fn rule(&self) -> NonmonotoneRule {
        self.rule
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn f_current(&self) -> f64 {
        self.f_current
    }

    pub fn cca_average(&self) -> f64 {
        self.cca_d
    }

    pub fn cca_weight(&self) -> f64 {
        self.cca_weight
    }

    /// `F_k` for the current iteration.
    pub fn reference_value(&self) -> f64 {
        match self.rule {
            NonmonotoneRule::Max { .. } => self.window.iter().copied().fold(f64::MIN, f64::max),
            NonmonotoneRule::Cca { .. } => self.f_current.max(self.cca_d),
            NonmonotoneRule::Mon => self.f_current,
            // 2^{-k} underflows to 0 for large k
            NonmonotoneRule::Ada => {
                self.f_current + 0.5f64.powi(self.k.min(i32::MAX as usize) as i32)
            }
        }
    }

    /// Moves to iteration `k + 1` with `f_{k+1} = f_{N_{k+1}}(x_{k+1})`.
    pub fn advance(&mut self, f_next: f64) {
        self.k += 1;
        self.f_current = f_next;
        if let NonmonotoneRule::Max { window } = self.rule {
            // the window spans i ∈ [max{1, k − window + 1}, k]
            if self.k == 1 {
                self.window.clear();
            }
            self.window.push_back(f_next);
            while self.window.len() > window {
                self.window.pop_front();
            }
        }
        if let NonmonotoneRule::Cca { eta } = self.rule {
            let weight = eta * self.cca_weight + 1.0;
            self.cca_d = (eta * self.cca_weight * self.cca_d + f_next) / weight;
            self.cca_weight = weight;
        }
    }
}

/// [`NonmonotoneState::reference_value`] as a free function.
pub fn reference_value(state: &NonmonotoneState) -> f64 {
    state.reference_value()
}

/// `m` equally spaced candidates `1/k + j(ᾱ_k − 1/k)/m`, `j = 1..m`, the
/// last one equal to `ᾱ_k`. Empty when `ᾱ_k ≤ 1/k`.
pub fn candidate_steps(k: usize, c2: f64, m: usize) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::InvalidConfig(
            "candidate steps are defined for k >= 1".into(),
        ));
    }
    if m == 0 || !(c2 > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "need m >= 1 and C2 > 0, got m = {m}, C2 = {c2}"
        )));
    }
    let lo = 1.0 / k as f64;
    let hi = upper_step(k, c2);
    if hi <= lo {
        return Ok(Vec::new());
    }
    let width = (hi - lo) / m as f64;
    let mut out: Vec<f64> = (1..=m).map(|j| lo + j as f64 * width).collect();
    out[m - 1] = hi;
    Ok(out)
}

/// `ᾱ_k = min{1, C2/k}`
pub fn upper_step(k: usize, c2: f64) -> f64 {
    (c2 / k as f64).min(1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineSearchOutcome {
    pub alpha: f64,
    /// Position of the accepted candidate (0-based), `None` on fallback.
    pub accepted_index: Option<usize>,
    /// `(step, value)` pairs in evaluation order.
    pub evaluations: Vec<(f64, f64)>,
}

/// Tries `candidates` from largest to smallest and returns the first one
/// satisfying `f(x + αp) ≤ F_k − ηα‖p‖²`; falls back to `1/k`.
///
/// `eval` computes the SAA value at a trial point.
pub fn line_search<F>(
    mut eval: F,
    x: &[f64],
    p: &[f64],
    reference: f64,
    eta: f64,
    candidates: &[f64],
    k: usize,
) -> Result<LineSearchOutcome>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    if k == 0 {
        return Err(Error::InvalidConfig("line search needs k >= 1".into()));
    }
    if !(eta > 0.0) {
        return Err(Error::InvalidConfig(format!("eta must be positive, got {eta}")));
    }
    let p_sq = dot(p, p);
    let mut evaluations = Vec::with_capacity(candidates.len());
    for (j, &alpha) in candidates.iter().enumerate().rev() {
        let trial = axpy(x, alpha, p);
        let f = eval(&trial)?;
        evaluations.push((alpha, f));
        if f <= reference - eta * alpha * p_sq {
            return Ok(LineSearchOutcome {
                alpha,
                accepted_index: Some(j),
                evaluations,
            });
        }
    }
    Ok(LineSearchOutcome {
        alpha: 1.0 / k as f64,
        accepted_index: None,
        evaluations,
    })
}
