//! Scaled subgradient directions with safeguarded spectral coefficients.
//!
//! The direction is `p_k = −ζ_k v_k` where `v_k = ḡ_k / max{1, ‖ḡ_k‖}` and
//! `ζ_k` is a Barzilai–Borwein-type coefficient clamped to `[ζ_lo, ζ_hi]`.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::linalg::{check_finite, dot, norm, scale, sub};

pub const ZETA_LO: f64 = 1e-4;
pub const ZETA_HI: f64 = 1e4;
/// `λ^{BB2}/λ^{BB1}` threshold below which ABB and ABBmin take the BB2 branch.
pub const ABB_SWITCH: f64 = 0.8;
/// History window of ABBmin.
pub const ABBMIN_WINDOW: usize = 5;

/// `(q, v)` with `q = max{1, ‖g‖}` and `v = g/q`.
pub fn scale_subgradient(g: &[f64]) -> Result<(f64, Vec<f64>)> {
    check_finite("subgradient", g)?;
    let q = norm(g).max(1.0);
    Ok((q, scale(g, 1.0 / q)))
}

/// `−ζ v`
pub fn search_direction(zeta: f64, v: &[f64]) -> Vec<f64> {
    scale(v, -zeta)
}

/// `(s, y) = (x_next − x_prev, g_tilde − g_bar_prev)`
pub fn pair_differences(
    x_prev: &[f64],
    x_next: &[f64],
    g_bar_prev: &[f64],
    g_tilde: &[f64],
) -> (Vec<f64>, Vec<f64>) {
    (sub(x_next, x_prev), sub(g_tilde, g_bar_prev))
}

/// Raw Barzilai–Borwein ratios `(sᵀs/sᵀy, yᵀs/yᵀy)`.
///
/// A ratio is `None` when its denominator is at most
/// `1e-12‖s‖‖y‖ + 1e-300`.
pub fn raw_bb(s: &[f64], y: &[f64]) -> (Option<f64>, Option<f64>) {
    let sy = dot(s, y);
    let yy = dot(y, y);
    let eps = 1e-12 * norm(s) * norm(y) + 1e-300;
    let bb1 = (sy > eps).then(|| dot(s, s) / sy);
    let bb2 = (yy > eps).then(|| sy / yy);
    (bb1, bb2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralRule {
    Bb1,
    Bb2,
    Abb,
    /// ABB with the BB2 branch replaced by the minimum over the last
    /// `window + 1` BB2 values.
    AbbMin { window: usize },
    Constant(f64),
}

impl SpectralRule {
    pub fn abb_min() -> Self {
        SpectralRule::AbbMin {
            window: ABBMIN_WINDOW,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SpectralRule::Bb1 => "bb1",
            SpectralRule::Bb2 => "bb2",
            SpectralRule::Abb => "abb",
            SpectralRule::AbbMin { .. } => "abbmin",
            SpectralRule::Constant(_) => "const",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState {
    rule: SpectralRule,
    zeta_lo: f64,
    zeta_hi: f64,
    zeta: f64,
    bb2_history: VecDeque<f64>,
}

impl SpectralState {
    pub fn new(rule: SpectralRule, zeta_lo: f64, zeta_hi: f64, zeta_0: f64) -> Result<Self> {
        if !(zeta_lo > 0.0 && zeta_lo <= zeta_0 && zeta_0 <= zeta_hi && zeta_hi.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "need 0 < zeta_lo <= zeta_0 <= zeta_hi < inf, got {zeta_lo}, {zeta_0}, {zeta_hi}"
            )));
        }
        if let SpectralRule::Constant(c) = rule {
            if !(c > 0.0) || !c.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "constant spectral coefficient must be positive, got {c}"
                )));
            }
        }
        let zeta = match rule {
            SpectralRule::Constant(c) => c.clamp(zeta_lo, zeta_hi),
            _ => zeta_0,
        };
        Ok(SpectralState {
            rule,
            zeta_lo,
            zeta_hi,
            zeta,
            bb2_history: VecDeque::new(),
        })
    }

    /// Default bounds `[1e-4, 1e4]` and `ζ_0 = 1`.
    pub fn with_defaults(rule: SpectralRule) -> Self {
        Self::new(rule, ZETA_LO, ZETA_HI, 1.0).expect("default bounds are valid")
    }

    pub fn rule(&self) -> SpectralRule {
        self.rule
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.zeta_lo, self.zeta_hi)
    }

    pub fn bb2_history(&self) -> impl Iterator<Item = f64> + '_ {
        self.bb2_history.iter().copied()
    }

    fn clamp(&self, lambda: f64) -> f64 {
        lambda.clamp(self.zeta_lo, self.zeta_hi)
    }

    /// Computes `ζ_{k+1}` from `(s_k, y_k)` and stores it as the current
    /// coefficient. Undefined ratios leave the coefficient unchanged.
    pub fn update(&mut self, s: &[f64], y: &[f64]) -> f64 {
        let (bb1, bb2) = raw_bb(s, y);
        if let (Some(v), SpectralRule::AbbMin { window }) = (bb2, self.rule) {
            self.bb2_history.push_back(v);
            while self.bb2_history.len() > window + 1 {
                self.bb2_history.pop_front();
            }
        }
        let lambda = match self.rule {
            SpectralRule::Bb1 => bb1,
            SpectralRule::Bb2 => bb2,
            SpectralRule::Constant(c) => Some(c),
            SpectralRule::Abb | SpectralRule::AbbMin { .. } => {
                let short_branch = match (bb1, bb2) {
                    (Some(l1), Some(l2)) => Some(l2 / l1 < ABB_SWITCH),
                    (None, Some(_)) => Some(true),
                    (Some(_), None) => Some(false),
                    (None, None) => None,
                };
                match short_branch {
                    Some(true) => match self.rule {
                        SpectralRule::AbbMin { .. } => {
                            self.bb2_history.iter().copied().reduce(f64::min)
                        }
                        _ => bb2,
                    },
                    Some(false) => bb1,
                    None => None,
                }
            }
        };
        if let Some(l) = lambda.filter(|l| !l.is_nan()) {
            self.zeta = self.clamp(l);
        }
        self.zeta
    }
}

/// [`SpectralState::update`] as a free function.
pub fn spectral_coefficient(state: &mut SpectralState, s: &[f64], y: &[f64]) -> f64 {
    state.update(s, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn scaling() {
        let (q, v) = scale_subgradient(&[3.0, 4.0]).unwrap();
        assert_eq!(q, 5.0);
        assert!((v[0] - 0.6).abs() < 1e-15 && (v[1] - 0.8).abs() < 1e-15);
        assert_eq!(scale_subgradient(&[0.3, 0.0]).unwrap(), (1.0, vec![0.3, 0.0]));
        assert_eq!(scale_subgradient(&[0.0, 0.0]).unwrap(), (1.0, vec![0.0, 0.0]));
        assert!(scale_subgradient(&[f64::INFINITY]).is_err());
    }

    #[test]
    fn raw_ratios() {
        assert_eq!(raw_bb(&[1.0, 0.0], &[2.0, 0.0]), (Some(0.5), Some(0.5)));
        assert_eq!(raw_bb(&[1.0, 0.0], &[0.0, 1.0]), (None, Some(0.0)));
        assert_eq!(raw_bb(&[1.0, 1.0], &[1.0, 1.0]), (Some(1.0), Some(1.0)));
        assert_eq!(raw_bb(&[0.0, 0.0], &[0.0, 0.0]), (None, None));
    }

    #[test]
    fn coefficient_examples() {
        let mut st = SpectralState::with_defaults(SpectralRule::Bb1);
        assert_eq!(st.update(&[1.0, 0.0], &[2.0, 0.0]), 0.5);

        let mut st = SpectralState::with_defaults(SpectralRule::Abb);
        assert_eq!(st.update(&[1.0, 1.0], &[1.0, 1.0]), 1.0);

        let mut st = SpectralState::new(SpectralRule::Bb1, ZETA_LO, ZETA_HI, 3.0).unwrap();
        assert_eq!(st.update(&[1.0, 0.0], &[-1.0, 0.0]), 3.0);

        for rule in [
            SpectralRule::Bb1,
            SpectralRule::Bb2,
            SpectralRule::Abb,
            SpectralRule::abb_min(),
            SpectralRule::Constant(1e6),
        ] {
            let mut st = SpectralState::with_defaults(rule);
            assert_eq!(st.update(&[1.0, 0.0], &[1e-6, 0.0]), ZETA_HI, "{rule:?}");
        }
    }

    #[test]
    fn abbmin_takes_window_minimum() {
        let mut st = SpectralState::with_defaults(SpectralRule::abb_min());
        // collinear pairs feed BB2 values 2 and 0.5 (ratio 1, BB1 branch)
        st.update(&[2.0, 0.0], &[1.0, 0.0]);
        st.update(&[1.0, 0.0], &[2.0, 0.0]);
        // s=(2,0), y=(1,1): BB1 = 2, BB2 = 1, ratio 0.5 < 0.8
        let z = st.update(&[2.0, 0.0], &[1.0, 1.0]);
        assert_eq!(st.bb2_history().collect::<Vec<_>>(), vec![2.0, 0.5, 1.0]);
        assert_eq!(z, 0.5);
    }

    #[test]
    fn abbmin_window_is_bounded() {
        let mut st = SpectralState::with_defaults(SpectralRule::abb_min());
        for i in 1..20 {
            st.update(&[i as f64, 0.0], &[1.0, 0.0]);
        }
        assert_eq!(st.bb2_history().count(), ABBMIN_WINDOW + 1);
    }

    #[test]
    fn abb_branches_with_missing_ratios() {
        // BB1 undefined (sᵀy = 0) but BB2 defined (= 0): BB2 branch, clamped
        let mut st = SpectralState::with_defaults(SpectralRule::Abb);
        assert_eq!(st.update(&[1.0, 0.0], &[0.0, 1.0]), ZETA_LO);
        // both undefined: unchanged
        let mut st = SpectralState::new(SpectralRule::Abb, ZETA_LO, ZETA_HI, 7.0).unwrap();
        assert_eq!(st.update(&[0.0, 0.0], &[0.0, 0.0]), 7.0);
    }

    #[test]
    fn directions_and_differences() {
        assert_eq!(search_direction(2.0, &[0.5, 0.0]), vec![-1.0, 0.0]);
        assert_eq!(search_direction(3.0, &[0.0, 0.0]), vec![-0.0, -0.0]);
        let p = search_direction(ZETA_HI, &[0.6, 0.8]);
        assert!((norm(&p) - ZETA_HI).abs() < 1e-9);
        assert_eq!(
            pair_differences(&[1.0, 2.0], &[1.0, 2.0], &[3.0, 3.0], &[3.0, 3.0]),
            (vec![0.0, 0.0], vec![0.0, 0.0])
        );
        assert_eq!(
            pair_differences(&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0], &[3.0, 1.0]),
            (vec![1.0, 0.0], vec![2.0, 0.0])
        );
    }

    #[test]
    fn invalid_bounds() {
        assert!(SpectralState::new(SpectralRule::Bb1, 0.0, 1.0, 0.5).is_err());
        assert!(SpectralState::new(SpectralRule::Bb1, 1.0, 2.0, 3.0).is_err());
        assert!(SpectralState::new(SpectralRule::Constant(-1.0), 1e-4, 1e4, 1.0).is_err());
    }

    fn vec2() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-10.0f64..10.0, 1..6)
    }

    proptest! {
        #[test]
        fn scaled_vector_bounded_and_parallel(g in vec2()) {
            let (q, v) = scale_subgradient(&g).unwrap();
            prop_assert!(q >= 1.0);
            prop_assert!(norm(&v) <= 1.0 + 1e-12);
            for (a, b) in v.iter().zip(&g) {
                prop_assert!((a * q - b).abs() <= 1e-12 * q.max(1.0));
            }
        }

        #[test]
        fn collinear_pairs_give_inverse_curvature(s in vec2(), c in 1e-3f64..1e3) {
            prop_assume!(norm(&s) > 1e-3);
            let y = scale(&s, c);
            for rule in [SpectralRule::Bb1, SpectralRule::Bb2, SpectralRule::Abb, SpectralRule::abb_min()] {
                let mut st = SpectralState::with_defaults(rule);
                let z = st.update(&s, &y);
                prop_assert!((z - (1.0 / c).clamp(ZETA_LO, ZETA_HI)).abs() <= 1e-9 / c);
            }
        }

        #[test]
        fn coefficient_stays_in_bounds(pairs in prop::collection::vec((vec2(), vec2()), 1..30), rule in 0u8..5) {
            let rule = match rule {
                0 => SpectralRule::Bb1,
                1 => SpectralRule::Bb2,
                2 => SpectralRule::Abb,
                3 => SpectralRule::abb_min(),
                _ => SpectralRule::Constant(0.3),
            };
            let mut st = SpectralState::with_defaults(rule);
            for (s, y) in pairs {
                let n = s.len().min(y.len());
                let z = st.update(&s[..n], &y[..n]);
                prop_assert!((ZETA_LO..=ZETA_HI).contains(&z));
            }
        }

        #[test]
        fn pair_differences_are_linear(a in vec2(), t in -3.0f64..3.0) {
            let z = vec![0.0; a.len()];
            let (s1, y1) = pair_differences(&z, &a, &z, &a);
            let ta = scale(&a, t);
            let (s2, y2) = pair_differences(&z, &ta, &z, &ta);
            for i in 0..a.len() {
                prop_assert!((s2[i] - t * s1[i]).abs() <= 1e-12);
                prop_assert!((y2[i] - t * y1[i]).abs() <= 1e-12);
            }
        }
    }
}
