//! Sample-size control.
//!
//! The adaptive rule grows the sample only when the realized step length
//! `θ_k` falls below the SAA error measure `h(N_k)`, and then to
//! `⌈max{(1 + θ_k)N_k, rN_k}⌉`, capped at the full sample. Samples are
//! cumulative prefixes of one permutation drawn at the start of the run.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::ceil_tol;

/// Whether the sample space is a finite sum of `N_max` terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleBound {
    Finite(usize),
    Unbounded,
}

/// `h(N)`: `(N_max − N)/N_max` for finite sums, `1/N` otherwise.
pub fn saa_error_measure(n: usize, bound: SampleBound) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroSampleSize);
    }
    match bound {
        SampleBound::Finite(n_max) => {
            if n > n_max {
                return Err(Error::InvalidConfig(format!(
                    "sample size {n} exceeds full size {n_max}"
                )));
            }
            Ok((n_max - n) as f64 / n_max as f64)
        }
        SampleBound::Unbounded => Ok(1.0 / n as f64),
    }
}

/// Size after a triggered increase: `⌈max{(1 + θ)N, rN}⌉`, at least `N + 1`
/// and capped at the full size for finite sums.
pub fn grown_size(n: usize, theta: f64, r: f64, bound: SampleBound) -> usize {
    let nf = n as f64;
    let raw = ceil_tol(((1.0 + theta) * nf).max(r * nf));
    let grown = if raw >= usize::MAX as f64 {
        usize::MAX
    } else {
        (raw as usize).max(n + 1)
    };
    match bound {
        SampleBound::Finite(n_max) => grown.min(n_max),
        SampleBound::Unbounded => grown,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleStrategy {
    /// Grow by [`grown_size`] when `θ_k < h(N_k)`.
    Adaptive { r: f64 },
    /// Grow every iteration: `⌈min{growth·N_k, N_max}⌉`.
    Heuristic { growth: f64 },
    /// Always the full sample.
    Full,
}

impl SampleStrategy {
    pub const DEFAULT_R: f64 = 1.1;

    pub fn adaptive() -> Self {
        SampleStrategy::Adaptive { r: Self::DEFAULT_R }
    }

    pub fn heuristic() -> Self {
        SampleStrategy::Heuristic { growth: 1.1 }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SampleStrategy::Adaptive { .. } => "ansps",
            SampleStrategy::Heuristic { .. } => "heur",
            SampleStrategy::Full => "full",
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            SampleStrategy::Adaptive { r } | SampleStrategy::Heuristic { growth: r }
                if !(r > 1.0) || !r.is_finite() =>
            {
                Err(Error::InvalidConfig(format!(
                    "growth factor must be finite and > 1, got {r}"
                )))
            }
            _ => Ok(()),
        }
    }
}

/// Current sample of a run: the first `N_k` entries of a fixed permutation.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSchedule {
    permutation: Vec<usize>,
    n_current: usize,
    n_initial: usize,
    strategy: SampleStrategy,
    resample_on_increase: bool,
}

impl SampleSchedule {
    /// Draws the permutation from `rng`. `n_initial` is ignored by the
    /// `Full` strategy.
    pub fn new<R: Rng + ?Sized>(
        n_max: usize,
        n_initial: usize,
        strategy: SampleStrategy,
        rng: &mut R,
    ) -> Result<Self> {
        let mut permutation: Vec<usize> = (0..n_max).collect();
        permutation.shuffle(rng);
        Self::from_permutation(permutation, n_initial, strategy)
    }

    pub fn from_permutation(
        permutation: Vec<usize>,
        n_initial: usize,
        strategy: SampleStrategy,
    ) -> Result<Self> {
        strategy.validate()?;
        let n_max = permutation.len();
        if n_max == 0 {
            return Err(Error::EmptyDataset);
        }
        let mut seen = vec![false; n_max];
        for &i in &permutation {
            if i >= n_max || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidConfig(
                    "sample order is not a permutation".into(),
                ));
            }
        }
        let n_initial = match strategy {
            SampleStrategy::Full => n_max,
            _ => n_initial,
        };
        if n_initial == 0 {
            return Err(Error::ZeroSampleSize);
        }
        if n_initial > n_max {
            return Err(Error::InvalidConfig(format!(
                "initial sample size {n_initial} exceeds full size {n_max}"
            )));
        }
        Ok(SampleSchedule {
            permutation,
            n_current: n_initial,
            n_initial,
            strategy,
            resample_on_increase: false,
        })
    }

    /// Draw a fresh sample (a reshuffle) whenever the size grows, instead
    /// of extending the current one. Off by default.
    pub fn with_resampling(mut self, on: bool) -> Self {
        self.resample_on_increase = on;
        self
    }

    pub fn n_current(&self) -> usize {
        self.n_current
    }

    pub fn n_initial(&self) -> usize {
        self.n_initial
    }

    pub fn n_max(&self) -> usize {
        self.permutation.len()
    }

    pub fn strategy(&self) -> SampleStrategy {
        self.strategy
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// The first `N_k` entries of the permutation.
    pub fn current_indices(&self) -> &[usize] {
        &self.permutation[..self.n_current]
    }

    pub fn error_measure(&self) -> f64 {
        saa_error_measure(self.n_current, SampleBound::Finite(self.n_max()))
            .expect("schedule keeps 1 <= N_k <= N_max")
    }

    /// Size for the next iteration given the step length `θ_k`.
    pub fn next_sample_size(&self, theta: f64) -> usize {
        let n = self.n_current;
        let n_max = self.n_max();
        match self.strategy {
            SampleStrategy::Adaptive { r } => {
                if theta < self.error_measure() {
                    grown_size(n, theta, r, SampleBound::Finite(n_max))
                } else {
                    n
                }
            }
            SampleStrategy::Heuristic { growth } => {
                (ceil_tol((growth * n as f64).min(n_max as f64)) as usize).clamp(n, n_max)
            }
            SampleStrategy::Full => n_max,
        }
    }

    /// Applies the update for `θ_k`; returns whether the sample changed.
    pub fn advance<R: Rng + ?Sized>(&mut self, theta: f64, rng: &mut R) -> bool {
        let next = self.next_sample_size(theta);
        if next == self.n_current {
            return false;
        }
        if self.resample_on_increase {
            self.permutation.shuffle(rng);
        }
        self.n_current = next;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn schedule(n_k: usize, n_max: usize, strategy: SampleStrategy) -> SampleSchedule {
        SampleSchedule::from_permutation((0..n_max).collect(), n_k, strategy).unwrap()
    }

    #[test]
    fn error_measure_values() {
        assert!((saa_error_measure(90, SampleBound::Finite(100)).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(saa_error_measure(100, SampleBound::Finite(100)).unwrap(), 0.0);
        assert_eq!(saa_error_measure(4, SampleBound::Unbounded).unwrap(), 0.25);
        assert_eq!(saa_error_measure(0, SampleBound::Unbounded), Err(Error::ZeroSampleSize));
        assert_eq!(saa_error_measure(0, SampleBound::Finite(3)), Err(Error::ZeroSampleSize));
        assert!(saa_error_measure(4, SampleBound::Finite(3)).is_err());
    }

    #[test]
    fn adaptive_growth_branches() {
        let s = schedule(100, 10_000, SampleStrategy::adaptive());
        assert!((s.error_measure() - 0.99).abs() < 1e-15);
        assert_eq!(s.next_sample_size(0.05), 110);
        assert_eq!(s.next_sample_size(0.2), 120);
        assert_eq!(s.next_sample_size(0.0), 110);
        assert_eq!(s.next_sample_size(0.99), 100);
        assert_eq!(s.next_sample_size(5.0), 100);
    }

    #[test]
    fn no_trigger_keeps_index_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut s = SampleSchedule::new(50, 10, SampleStrategy::adaptive(), &mut rng).unwrap();
        let before = s.current_indices().to_vec();
        assert!(!s.advance(1.0, &mut rng));
        assert_eq!(s.current_indices(), before.as_slice());
    }

    #[test]
    fn growth_caps_at_full_size() {
        let s = schedule(95, 100, SampleStrategy::adaptive());
        assert_eq!(s.next_sample_size(0.0), 100);
        let s = schedule(1, 4, SampleStrategy::adaptive());
        assert_eq!(s.next_sample_size(0.0), 2);
        assert_eq!(grown_size(10, 0.5, 1.1, SampleBound::Unbounded), 15);
    }

    #[test]
    fn heuristic_and_full() {
        let s = schedule(100, 10_000, SampleStrategy::heuristic());
        assert_eq!(s.next_sample_size(123.0), 110);
        let s = schedule(9_999, 10_000, SampleStrategy::heuristic());
        assert_eq!(s.next_sample_size(0.0), 10_000);
        let s = schedule(3, 10, SampleStrategy::Full);
        assert_eq!(s.n_current(), 10);
        assert_eq!(s.next_sample_size(0.0), 10);
    }

    #[test]
    fn indices_are_permutation_prefix() {
        let s = SampleSchedule::from_permutation(vec![3, 0, 2, 1], 2, SampleStrategy::adaptive())
            .unwrap();
        assert_eq!(s.current_indices(), &[3, 0]);
        let s = SampleSchedule::from_permutation(vec![3, 0, 2, 1], 4, SampleStrategy::adaptive())
            .unwrap();
        assert_eq!(s.current_indices(), &[3, 0, 2, 1]);
    }

    #[test]
    fn same_seed_same_indices() {
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut s = SampleSchedule::new(200, 20, SampleStrategy::adaptive(), &mut rng).unwrap();
            let mut sets = vec![s.current_indices().to_vec()];
            for t in [0.0, 0.5, 0.01, 2.0, 0.0] {
                s.advance(t, &mut rng);
                sets.push(s.current_indices().to_vec());
            }
            sets
        };
        assert_eq!(run(4), run(4));
        assert_ne!(run(4), run(5));
    }

    #[test]
    fn rejects_invalid_schedules() {
        assert!(SampleSchedule::from_permutation(vec![0, 0], 1, SampleStrategy::Full).is_err());
        assert!(SampleSchedule::from_permutation(vec![0, 1], 0, SampleStrategy::adaptive()).is_err());
        assert!(SampleSchedule::from_permutation(vec![0, 1], 3, SampleStrategy::adaptive()).is_err());
        assert!(SampleSchedule::from_permutation(
            vec![0, 1],
            1,
            SampleStrategy::Adaptive { r: 1.0 }
        )
        .is_err());
    }

    #[test]
    fn resampling_reshuffles_on_increase() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut s = SampleSchedule::new(1000, 100, SampleStrategy::adaptive(), &mut rng)
            .unwrap()
            .with_resampling(true);
        let before = s.current_indices().to_vec();
        assert!(s.advance(0.0, &mut rng));
        assert_eq!(s.n_current(), 110);
        assert_ne!(&s.current_indices()[..100], before.as_slice());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn growth_is_monotone_nested_and_sound(
                n_max in 1usize..5000,
                frac in 0.0f64..1.0,
                thetas in prop::collection::vec(prop_oneof![Just(0.0), 0.0f64..1.5], 1..60),
                kind in 0u8..3,
                seed in any::<u64>(),
            ) {
                let strategy = match kind {
                    0 => SampleStrategy::adaptive(),
                    1 => SampleStrategy::heuristic(),
                    _ => SampleStrategy::Full,
                };
                let n0 = ((frac * n_max as f64).ceil() as usize).clamp(1, n_max);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut s = SampleSchedule::new(n_max, n0, strategy, &mut rng).unwrap();
                for theta in thetas {
                    let before = s.current_indices().to_vec();
                    let n = s.n_current();
                    let h = s.error_measure();
                    s.advance(theta, &mut rng);
                    let next = s.n_current();
                    prop_assert!(next >= n && next <= n_max);
                    prop_assert!(s.current_indices().starts_with(&before));
                    if let SampleStrategy::Adaptive { .. } = strategy {
                        if next == n {
                            prop_assert!(theta >= h);
                        } else {
                            prop_assert!(theta < h);
                            let floor = ceil_tol(1.1 * n as f64) as usize;
                            prop_assert!(next >= floor.min(n_max));
                        }
                    }
                    if strategy == SampleStrategy::Full {
                        prop_assert_eq!(next, n_max);
                    }
                }
            }
        }
    }
}
