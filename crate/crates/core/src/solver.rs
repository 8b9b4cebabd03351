//! The adaptive-sample-size nonmonotone spectral projected subgradient loop.
//!
//! One iteration `k`:
//! 1. `ḡ_k ∈ ∂f_{N_k}(x_k)`, `q_k = max{1, ‖ḡ_k‖}`, `v_k = ḡ_k/q_k`, `p_k = −ζ_k v_k`;
//! 2. `α_0 = 1`, otherwise the nonmonotone line search against `F_k`;
//! 3. `x_{k+1} = P(x_k + α_k p_k)`, `θ_k = ‖x_{k+1} − x_k‖`;
//! 4. `ζ_{k+1}` from `s_k = x_{k+1} − x_k` and `y_k = g̃_k − ḡ_k`, with
//!    `g̃_k ∈ ∂f_{N_k}(x_{k+1})` on the same sample;
//! 5. sample-size update from `θ_k`;
//! 6. `F_{k+1}` from `f_{N_{k+1}}(x_{k+1})`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::direction::{
    pair_differences, scale_subgradient, search_direction, SpectralRule, SpectralState, ZETA_HI,
    ZETA_LO,
};
use crate::error::{Error, Result};
use crate::linalg::{axpy, ceil_tol, check_dim, check_finite, distance, norm};
use crate::linesearch::{candidate_steps, line_search, NonmonotoneRule, NonmonotoneState};
use crate::oracle::SaaOracle;
use crate::problems::{HingeOracle, HingeProblem};
use crate::region::{project, FeasibleRegion};
use crate::sampling::{SampleSchedule, SampleStrategy};
use crate::trace::{RunStatus, RunTrace, StepDiagnostics, TraceRow};

#[derive(Debug, Clone, PartialEq)]
pub enum InitialPoint {
    /// Drawn from the region with the run's seed.
    RandomInRegion,
    /// Projected onto the region.
    Given(Vec<f64>),
    /// Projection of the origin.
    ZeroProjected,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub c2: f64,
    pub eta: f64,
    /// Number of line-search candidates.
    pub m: usize,
    pub zeta_lo: f64,
    pub zeta_hi: f64,
    pub zeta_0: f64,
    /// `N_0 = ⌈n0_frac · N_max⌉`.
    pub n0_frac: f64,
    pub strategy: SampleStrategy,
    pub spectral: SpectralRule,
    pub nonmonotone: NonmonotoneRule,
    pub seed: u64,
    /// Last iteration index executed; a run has up to `max_iterations + 1` rows.
    pub max_iterations: usize,
    pub fev_budget: Option<u64>,
    pub initial_point: InitialPoint,
    /// `f_full` is recorded on rows with `k % full_value_stride == 0`.
    pub full_value_stride: usize,
    /// Stop once an iteration has run on the full sample.
    pub stop_at_full_sample: bool,
    /// Reshuffle the sample when it grows instead of extending it.
    pub resample_on_increase: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            c2: 100.0,
            eta: 1e-4,
            m: 2,
            zeta_lo: ZETA_LO,
            zeta_hi: ZETA_HI,
            zeta_0: 1.0,
            n0_frac: 0.1,
            strategy: SampleStrategy::adaptive(),
            spectral: SpectralRule::Abb,
            nonmonotone: NonmonotoneRule::Ada,
            seed: 0,
            max_iterations: 1000,
            fev_budget: None,
            initial_point: InitialPoint::RandomInRegion,
            full_value_stride: 10,
            stop_at_full_sample: false,
            resample_on_increase: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if !(self.c2 > 0.0) || !self.c2.is_finite() {
            return bad(format!("C2 must be positive, got {}", self.c2));
        }
        if !(self.eta > 0.0) || !self.eta.is_finite() {
            return bad(format!("eta must be positive, got {}", self.eta));
        }
        if self.m == 0 {
            return bad("m must be at least 1".into());
        }
        if !(self.n0_frac > 0.0 && self.n0_frac <= 1.0) {
            return bad(format!("n0 fraction must lie in (0, 1], got {}", self.n0_frac));
        }
        if self.full_value_stride == 0 {
            return bad("full-value stride must be at least 1".into());
        }
        SpectralState::new(self.spectral, self.zeta_lo, self.zeta_hi, self.zeta_0)?;
        NonmonotoneState::new(self.nonmonotone, 0.0)?;
        Ok(())
    }

    /// `⌈n0_frac · N_max⌉`, at least 1.
    pub fn initial_sample_size(&self, n_max: usize) -> usize {
        (ceil_tol(self.n0_frac * n_max as f64) as usize).clamp(1, n_max)
    }
}

/// Mutable state of a run between iterations.
#[derive(Debug, Clone)]
pub struct SolverState {
    pub k: usize,
    pub x: Vec<f64>,
    /// `f_{N_k}(x_k)`
    pub f_current: f64,
    pub schedule: SampleSchedule,
    pub spectral: SpectralState,
    pub nonmonotone: NonmonotoneState,
    pub rows: Vec<TraceRow>,
    pub diagnostics: Vec<StepDiagnostics>,
}

pub struct Solver<O: SaaOracle> {
    config: SolverConfig,
    oracle: O,
    region: FeasibleRegion,
    rng: ChaCha8Rng,
    state: SolverState,
}

impl<O: SaaOracle> Solver<O> {
    /// Initializes `x_0`, the sample and `F_0 = f_{N_0}(x_0)`.
    pub fn new(config: SolverConfig, oracle: O, region: FeasibleRegion) -> Result<Self> {
        config.validate()?;
        let n = oracle.dim();
        let n_max = oracle.full_size();
        if n_max == 0 {
            return Err(Error::EmptyDataset);
        }
        if let Some(d) = region.dim() {
            check_dim(n, &vec![0.0; d])?;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let schedule = SampleSchedule::new(
            n_max,
            config.initial_sample_size(n_max),
            config.strategy,
            &mut rng,
        )?
        .with_resampling(config.resample_on_increase);
        let x = match &config.initial_point {
            InitialPoint::RandomInRegion => region.random_point(n, &mut rng),
            InitialPoint::Given(x0) => {
                check_dim(n, x0)?;
                project(&region, x0)?
            }
            InitialPoint::ZeroProjected => project(&region, &vec![0.0; n])?,
        };
        let f0 = oracle.value(&x, schedule.current_indices())?;
        if !f0.is_finite() {
            return Err(Error::NonFinite("initial objective".into()));
        }
        let spectral = SpectralState::new(
            config.spectral,
            config.zeta_lo,
            config.zeta_hi,
            config.zeta_0,
        )?;
        let nonmonotone = NonmonotoneState::new(config.nonmonotone, f0)?;
        Ok(Solver {
            config,
            oracle,
            region,
            rng,
            state: SolverState {
                k: 0,
                x,
                f_current: f0,
                schedule,
                spectral,
                nonmonotone,
                rows: Vec::new(),
                diagnostics: Vec::new(),
            },
        })
    }

    pub fn state(&self) -> &SolverState {
        &self.state
    }

    pub fn oracle(&self) -> &O {
        &self.oracle
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    /// Why the run should stop before the next iteration, if it should.
    pub fn stop_reason(&self) -> Option<RunStatus> {
        if self.config.stop_at_full_sample
            && self
                .state
                .rows
                .last()
                .is_some_and(|r| r.n_k == self.state.schedule.n_max())
        {
            return Some(RunStatus::FullSampleReached);
        }
        if self.state.k > self.config.max_iterations {
            return Some(RunStatus::IterationLimit);
        }
        if self
            .config
            .fev_budget
            .is_some_and(|b| self.oracle.fev() >= b)
        {
            return Some(RunStatus::FevBudget);
        }
        None
    }

    /// Executes one iteration and appends its trace row.
    pub fn step(&mut self) -> Result<&TraceRow> {
        let cfg = &self.config;
        let st = &mut self.state;
        let k = st.k;
        let fev_start = self.oracle.fev();
        let indices = st.schedule.current_indices().to_vec();
        let n_k = indices.len();
        let f_k = st.f_current;
        let reference = st.nonmonotone.reference_value();

        let f_full = if k.is_multiple_of(cfg.full_value_stride) {
            Some(self.oracle.diagnostic_value(&st.x)?)
        } else {
            None
        };

        // search direction
        let g_bar = self.oracle.subgradient(&st.x, &indices)?;
        let (q, v) = scale_subgradient(&g_bar)?;
        let zeta = st.spectral.zeta();
        let p = search_direction(zeta, &v);

        // step size
        let (alpha, candidates, evaluations, accepted_index) = if k == 0 {
            (1.0, Vec::new(), Vec::new(), None)
        } else {
            let candidates = candidate_steps(k, cfg.c2, cfg.m)?;
            let oracle = &self.oracle;
            let out = line_search(
                |z| oracle.value(z, &indices),
                &st.x,
                &p,
                reference,
                cfg.eta,
                &candidates,
                k,
            )?;
            (out.alpha, candidates, out.evaluations, out.accepted_index)
        };

        // projected update
        let z = axpy(&st.x, alpha, &p);
        let x_next = project(&self.region, &z)?;
        check_finite("iterate", &x_next)?;
        let theta = distance(&x_next, &st.x);

        // spectral coefficient on the same sample
        let g_tilde = self.oracle.subgradient(&x_next, &indices)?;
        check_finite("subgradient", &g_tilde)?;
        let (s, y) = pair_differences(&st.x, &x_next, &g_bar, &g_tilde);
        st.spectral.update(&s, &y);

        // sample size
        let h_k = st.schedule.error_measure();
        st.schedule.advance(theta, &mut self.rng);

        // reference value for the next iteration
        let f_next = self.oracle.value(&x_next, st.schedule.current_indices())?;
        if !f_next.is_finite() {
            return Err(Error::NonFinite(format!("objective at iteration {}", k + 1)));
        }
        st.nonmonotone.advance(f_next);

        st.rows.push(TraceRow {
            k,
            n_k,
            alpha_k: alpha,
            zeta_k: zeta,
            theta_k: theta,
            fev_cum: fev_start,
            f_saa: f_k,
            f_full,
        });
        st.diagnostics.push(StepDiagnostics {
            k,
            reference_value: reference,
            q_k: q,
            v_norm: norm(&v),
            p_norm: norm(&p),
            candidates,
            evaluations,
            accepted_index,
            h_k,
            n_next: st.schedule.n_current(),
            fev_step: self.oracle.fev() - fev_start,
        });
        st.x = x_next;
        st.f_current = f_next;
        st.k += 1;
        Ok(st.rows.last().expect("row just pushed"))
    }

    /// Iterates until a stop condition holds. A failing iteration ends the
    /// run with [`RunStatus::Aborted`] and the rows recorded so far.
    pub fn run(mut self) -> Result<RunTrace> {
        let status = loop {
            if let Some(reason) = self.stop_reason() {
                break reason;
            }
            if let Err(e) = self.step() {
                break RunStatus::Aborted {
                    k: self.state.k,
                    reason: e.to_string(),
                };
            }
        };
        let final_f_full = self
            .oracle
            .diagnostic_value(&self.state.x)
            .unwrap_or(f64::NAN);
        Ok(RunTrace {
            n_initial: self.state.schedule.n_initial(),
            n_max: self.state.schedule.n_max(),
            rows: self.state.rows,
            diagnostics: self.state.diagnostics,
            status,
            final_x: self.state.x,
            final_f_full,
            total_fev: self.oracle.fev(),
        })
    }
}

/// Runs the solver on a hinge-loss problem over its own region.
pub fn run(config: &SolverConfig, problem: &HingeProblem) -> Result<RunTrace> {
    Solver::new(config.clone(), HingeOracle::new(problem), problem.region().clone())?.run()
}

/// Runs the solver on an arbitrary oracle and region.
pub fn run_with<O: SaaOracle>(
    config: &SolverConfig,
    oracle: O,
    region: &FeasibleRegion,
) -> Result<RunTrace> {
    Solver::new(config.clone(), oracle, region.clone())?.run()
}

/// Worst-case iteration count to reach the full sample,
/// `(⌈C2·ζ_hi·N⌉ + 1)·log(N/N_0)/log(r)`, next to the observed one.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityReport {
    pub n_initial: usize,
    pub n_max: usize,
    pub bound: f64,
    pub observed: Option<usize>,
}

impl ComplexityReport {
    /// Whether the observed iteration respects the bound (false if the
    /// full sample was never reached).
    pub fn within_bound(&self) -> bool {
        self.observed.is_some_and(|k| k as f64 <= self.bound)
    }
}

/// Bound for the adaptive rule; the growth factor is `r` of the adaptive
/// strategy (1.1 for the other strategies).
pub fn complexity_report(trace: &RunTrace, config: &SolverConfig) -> ComplexityReport {
    let r = match config.strategy {
        SampleStrategy::Adaptive { r } => r,
        _ => SampleStrategy::DEFAULT_R,
    };
    let n = trace.n_max as f64;
    let n0 = trace.n_initial as f64;
    let inner = (config.c2 * config.zeta_hi * n).ceil() + 1.0;
    let bound = inner * (n / n0).ln() / r.ln();
    ComplexityReport {
        n_initial: trace.n_initial,
        n_max: trace.n_max,
        bound,
        observed: trace.full_sample_iteration(),
    }
}
