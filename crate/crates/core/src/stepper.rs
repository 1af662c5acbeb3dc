//! Fourier-side Cayley and filter multipliers, the fixed-point map of the
//! trapezoidal step, and time integration.
//!
//! Integrating the system over one step `dt` with the trapezoidal rule and
//! writing `d = dt/2` gives the implicit update
//!
//! ```text
//! (I - d L(D)) u' = (I + d L(D)) u + d M(D) [G(u) + G(u')],
//! ```
//!
//! whose solution `u'` is the fixed point of
//! `w -> C u + B [G(u) + G(w)]`, with `C = (I + d L)/(I - d L)` the Cayley
//! transform and `B = d M / (I - d L)` the low-pass filter. Both are diagonal
//! on the Fourier side: per mode, `C` has the unit-modulus factor
//! `(1 + d L(i kappa)) / (1 - d L(i kappa))` and `B` the decaying factor
//! `d M(i kappa) / (1 - d L(i kappa))`. The denominators never vanish because
//! `L(i kappa)` is purely imaginary.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::equations::{EquationSystem, SystemError};
use crate::spectral::{
    self, apply_multiplier, dft_forward, dft_inverse, Field, NyquistPolicy, SpectralError,
    SpectralGrid, Spectrum,
};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Default iteration count of the fixed-count mode.
pub const DEFAULT_FIXED_ITERATIONS: usize = 3;
/// Default relative tolerance of the tolerance mode.
pub const DEFAULT_REL_TOL: f64 = 1e-12;
/// Default iteration cap of the tolerance mode.
pub const DEFAULT_MAX_ITERATIONS: usize = 25;
/// A step aborts when an iterate difference exceeds the first difference by
/// this factor.
pub const DIVERGENCE_FACTOR: f64 = 1e6;

/// Errors from multiplier construction and stepping.
#[derive(Debug, Clone, PartialEq)]
pub enum StepError {
    /// Time step must be finite and positive.
    InvalidTimeStep { dt: f64 },
    /// Fixed iteration count must be at least 1.
    InvalidIterationCount { count: usize },
    /// Relative tolerance must be finite and positive.
    InvalidTolerance { tolerance: f64 },
    /// State resolution does not match the grid.
    GridMismatch { expected: usize, found: usize },
    /// State component count does not match the system.
    ComponentMismatch { expected: usize, found: usize },
    /// An iterate contains non-finite samples.
    NonFinite,
    /// Iterate differences grew beyond [`DIVERGENCE_FACTOR`] times the first
    /// difference.
    Diverged {
        iteration: usize,
        diff_norm: f64,
        initial_diff: f64,
    },
    /// Tolerance mode failed to converge within the iteration cap.
    MaxIterationsExceeded { limit: usize, last_diff: f64 },
    /// Observer cadence must be at least 1.
    InvalidCadence,
    /// Integration target lies before the current time.
    TimeTargetInPast { t_end: f64, current: f64 },
    /// A step failed while integrating; `index` counts steps within the
    /// integrate call, starting at 1.
    AtStep { index: u64, error: alloc::boxed::Box<StepError> },
    System(SystemError),
    Spectral(SpectralError),
}

impl core::fmt::Display for StepError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            StepError::InvalidTimeStep { dt } => {
                write!(f, "time step {dt} must be finite and positive")
            }
            StepError::InvalidIterationCount { count } => {
                write!(f, "iteration count {count} must be at least 1")
            }
            StepError::InvalidTolerance { tolerance } => {
                write!(f, "tolerance {tolerance} must be finite and positive")
            }
            StepError::GridMismatch { expected, found } => {
                write!(f, "state has {found} samples but the grid has {expected}")
            }
            StepError::ComponentMismatch { expected, found } => {
                write!(f, "state has {found} components but the system has {expected}")
            }
            StepError::NonFinite => write!(f, "iterate contains non-finite samples"),
            StepError::Diverged {
                iteration,
                diff_norm,
                initial_diff,
            } => write!(
                f,
                "fixed-point iteration diverged at iteration {iteration}: \
                 difference {diff_norm} vs initial {initial_diff}"
            ),
            StepError::MaxIterationsExceeded { limit, last_diff } => write!(
                f,
                "no convergence within {limit} iterations (last difference {last_diff})"
            ),
            StepError::InvalidCadence => write!(f, "observer cadence must be at least 1"),
            StepError::TimeTargetInPast { t_end, current } => {
                write!(f, "target time {t_end} lies before current time {current}")
            }
            StepError::AtStep { index, error } => write!(f, "step {index} failed: {error}"),
            StepError::System(e) => write!(f, "{e}"),
            StepError::Spectral(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for StepError {}

impl From<SystemError> for StepError {
    fn from(e: SystemError) -> Self {
        StepError::System(e)
    }
}

impl From<SpectralError> for StepError {
    fn from(e: SpectralError) -> Self {
        StepError::Spectral(e)
    }
}

/// Per-component, per-mode diagonal factors of the Cayley and filter
/// operators for one `(system, grid, dt)` triple.
#[derive(Debug, Clone, PartialEq)]
pub struct Multipliers {
    cayley: Vec<Vec<Complex64>>,
    filter: Vec<Vec<Complex64>>,
    half_dt: f64,
}

impl Multipliers {
    /// Unit-modulus Cayley factors, one row per component.
    pub fn cayley(&self) -> &[Vec<Complex64>] {
        &self.cayley
    }

    /// Filter factors `d M(i kappa) / (1 - d L(i kappa))`, one row per
    /// component.
    pub fn filter(&self) -> &[Vec<Complex64>] {
        &self.filter
    }

    /// `d = dt / 2`.
    pub fn half_dt(&self) -> f64 {
        self.half_dt
    }

    /// Largest filter factor magnitude over components and modes; this is
    /// the discrete L2 operator norm of the filter.
    pub fn max_abs_filter(&self) -> f64 {
        let mut best = 0.0_f64;
        for row in &self.filter {
            for z in row {
                let a = z.norm();
                if a > best {
                    best = a;
                }
            }
        }
        best
    }

    /// Largest deviation of a Cayley factor from unit modulus.
    pub fn max_cayley_modulus_error(&self) -> f64 {
        let mut worst = 0.0_f64;
        for row in &self.cayley {
            for z in row {
                let e = libm::fabs(z.norm() - 1.0);
                if e > worst {
                    worst = e;
                }
            }
        }
        worst
    }
}

/// Builds the Cayley and filter diagonals for every component and mode.
///
/// Under [`NyquistPolicy::Zero`] the filter's Nyquist entry is zeroed, and
/// the Cayley entry at the Nyquist mode is rebuilt from the even part of the
/// linear symbol when that symbol is odd (the even part is then zero, so the
/// entry becomes 1); otherwise it is left unchanged.
pub fn build_multipliers(
    system: &EquationSystem,
    grid: &SpectralGrid,
    dt: f64,
    policy: NyquistPolicy,
) -> Result<Multipliers, StepError> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(StepError::InvalidTimeStep { dt });
    }
    let d = 0.5 * dt;
    let n = system.n_components();
    let mut cayley = Vec::with_capacity(n);
    let mut filter = Vec::with_capacity(n);
    for i in 0..n {
        let linear = system.linear_symbol(i);
        let nonlinear = system.nonlinear_symbol(i);
        let mut c_row = Vec::with_capacity(grid.n_points());
        let mut b_row = Vec::with_capacity(grid.n_points());
        for &kappa in grid.wavenumbers() {
            let dl = d * linear.eval_at_i_kappa(kappa);
            let denom = ONE - dl;
            c_row.push((ONE + dl) / denom);
            b_row.push(d * nonlinear.eval_at_i_kappa(kappa) / denom);
        }
        if policy == NyquistPolicy::Zero {
            let nyq = grid.nyquist_index();
            b_row[nyq] = Complex64::new(0.0, 0.0);
            if linear.is_odd() {
                c_row[nyq] = ONE;
            }
        }
        cayley.push(c_row);
        filter.push(b_row);
    }
    Ok(Multipliers {
        cayley,
        filter,
        half_dt: d,
    })
}

/// Termination rule for the fixed-point iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IterationMode {
    /// Run exactly this many iterations.
    FixedCount(usize),
    /// Iterate until `|w_next - w| <= rel_tol * max(1, |w|)` in discrete L2,
    /// failing after `max_iterations`.
    Tolerance { rel_tol: f64, max_iterations: usize },
}

/// Time step size, iteration rule, and Nyquist policy for a solver session.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepConfig {
    dt: f64,
    mode: IterationMode,
    nyquist: NyquistPolicy,
}

impl StepConfig {
    /// Fixed-count iteration; the customary count is
    /// [`DEFAULT_FIXED_ITERATIONS`].
    pub fn fixed(dt: f64, iterations: usize) -> Result<Self, StepError> {
        if !dt.is_finite() || dt <= 0.0 {
            return Err(StepError::InvalidTimeStep { dt });
        }
        if iterations == 0 {
            return Err(StepError::InvalidIterationCount { count: iterations });
        }
        Ok(Self {
            dt,
            mode: IterationMode::FixedCount(iterations),
            nyquist: NyquistPolicy::default(),
        })
    }

    /// Tolerance-controlled iteration.
    pub fn with_tolerance(
        dt: f64,
        rel_tol: f64,
        max_iterations: usize,
    ) -> Result<Self, StepError> {
        if !dt.is_finite() || dt <= 0.0 {
            return Err(StepError::InvalidTimeStep { dt });
        }
        if !rel_tol.is_finite() || rel_tol <= 0.0 {
            return Err(StepError::InvalidTolerance { tolerance: rel_tol });
        }
        if max_iterations == 0 {
            return Err(StepError::InvalidIterationCount {
                count: max_iterations,
            });
        }
        Ok(Self {
            dt,
            mode: IterationMode::Tolerance {
                rel_tol,
                max_iterations,
            },
            nyquist: NyquistPolicy::default(),
        })
    }

    /// Replaces the Nyquist policy.
    pub fn nyquist(mut self, policy: NyquistPolicy) -> Self {
        self.nyquist = policy;
        self
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn mode(&self) -> IterationMode {
        self.mode
    }

    pub fn nyquist_policy(&self) -> NyquistPolicy {
        self.nyquist
    }
}

/// Iterate-difference record of one step: `diff_norms[j]` holds
/// `|w_{j+1} - w_j|` in discrete L2.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IterationStats {
    diff_norms: Vec<f64>,
    iterations: usize,
}

impl IterationStats {
    pub fn diff_norms(&self) -> &[f64] {
        &self.diff_norms
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Successive ratios `delta_{j+1} / delta_j`, defined only where
    /// `delta_j > 0`.
    pub fn ratios(&self) -> Vec<f64> {
        self.diff_norms
            .windows(2)
            .filter(|w| w[0] > 0.0)
            .map(|w| w[1] / w[0])
            .collect()
    }

    /// `delta_2 / delta_1` when defined.
    pub fn first_ratio(&self) -> Option<f64> {
        match self.diff_norms.as_slice() {
            [first, second, ..] if *first > 0.0 => Some(second / first),
            _ => None,
        }
    }

    pub fn max_ratio(&self) -> Option<f64> {
        self.ratios().into_iter().reduce(f64::max)
    }
}

/// Per-step data reused across fixed-point iterations: the Cayley image of
/// the current state's spectrum and the nonlinearity of the current state.
#[derive(Debug, Clone)]
pub struct StepPrecomputed {
    cayley_state: Spectrum,
    nonlin_state: Field,
}

/// Summary of an [`SolverSession::integrate`] call.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationSummary {
    /// Steps taken by this call.
    pub steps: u64,
    /// Session time after the last step.
    pub final_time: f64,
    /// Observer invocations, including the initial snapshot.
    pub observations: u64,
}

/// Owns one integration in progress: the system, grid, precomputed
/// multipliers, current state, and iteration statistics.
///
/// Sessions are single-owner; distinct sessions are fully independent. The
/// reported time is always `start_time + steps * dt`, computed as a product.
#[derive(Debug)]
pub struct SolverSession {
    system: EquationSystem,
    grid: SpectralGrid,
    multipliers: Multipliers,
    state: Field,
    config: StepConfig,
    start_time: f64,
    steps_taken: u64,
    last_stats: Option<IterationStats>,
}

impl SolverSession {
    pub fn new(
        system: EquationSystem,
        grid: SpectralGrid,
        config: StepConfig,
        initial_state: Field,
    ) -> Result<Self, StepError> {
        if initial_state.n_components() != system.n_components() {
            return Err(StepError::ComponentMismatch {
                expected: system.n_components(),
                found: initial_state.n_components(),
            });
        }
        if initial_state.n_points() != grid.n_points() {
            return Err(StepError::GridMismatch {
                expected: grid.n_points(),
                found: initial_state.n_points(),
            });
        }
        if !initial_state.is_finite() {
            return Err(StepError::NonFinite);
        }
        let multipliers = build_multipliers(&system, &grid, config.dt(), config.nyquist_policy())?;
        Ok(Self {
            system,
            grid,
            multipliers,
            state: initial_state,
            config,
            start_time: 0.0,
            steps_taken: 0,
            last_stats: None,
        })
    }

    /// Shifts the reported time origin.
    pub fn with_start_time(mut self, t0: f64) -> Self {
        self.start_time = t0;
        self
    }

    pub fn time(&self) -> f64 {
        self.start_time + self.steps_taken as f64 * self.config.dt()
    }

    pub fn state(&self) -> &Field {
        &self.state
    }

    pub fn system(&self) -> &EquationSystem {
        &self.system
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn config(&self) -> &StepConfig {
        &self.config
    }

    pub fn multipliers(&self) -> &Multipliers {
        &self.multipliers
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps_taken
    }

    pub fn last_stats(&self) -> Option<&IterationStats> {
        self.last_stats.as_ref()
    }

    /// Replaces the step configuration, rebuilding the multipliers only when
    /// the step size or Nyquist policy changed.
    pub fn set_config(&mut self, config: StepConfig) -> Result<(), StepError> {
        if config.dt() != self.config.dt() || config.nyquist_policy() != self.config.nyquist_policy()
        {
            // Freeze the time already elapsed under the old step size.
            self.start_time = self.time();
            self.steps_taken = 0;
            self.multipliers =
                build_multipliers(&self.system, &self.grid, config.dt(), config.nyquist_policy())?;
        }
        self.config = config;
        Ok(())
    }

    /// Computes the per-step data: `Cayley * FT(u)` and `G(u)` for the
    /// current state `u`.
    pub fn precompute_step(&self) -> Result<StepPrecomputed, StepError> {
        let state_hat = dft_forward(&self.state, &self.grid)?;
        let cayley_state = apply_multiplier(&state_hat, self.multipliers.cayley())?;
        let nonlin_state = self.system.eval_nonlinearity(&self.state)?;
        Ok(StepPrecomputed {
            cayley_state,
            nonlin_state,
        })
    }

    /// One application of the fixed-point map:
    /// `IFT( Cayley * FT(u) + Filter * FT( G(u) + G(w) ) )`.
    pub fn apply_fixed_point_map(
        &self,
        w: &Field,
        pre: &StepPrecomputed,
    ) -> Result<Field, StepError> {
        if w.n_components() != self.system.n_components() {
            return Err(StepError::ComponentMismatch {
                expected: self.system.n_components(),
                found: w.n_components(),
            });
        }
        if w.n_points() != self.grid.n_points() {
            return Err(StepError::GridMismatch {
                expected: self.grid.n_points(),
                found: w.n_points(),
            });
        }
        let nonlin_w = self.system.eval_nonlinearity(w)?;
        let sum = add_fields(&pre.nonlin_state, &nonlin_w);
        let sum_hat = dft_forward(&sum, &self.grid)?;
        let filtered = apply_multiplier(&sum_hat, self.multipliers.filter())?;
        let total = add_spectra(&pre.cayley_state, &filtered);
        let next = dft_inverse(&total, &self.grid)?;
        if !next.is_finite() {
            return Err(StepError::NonFinite);
        }
        Ok(next)
    }

    /// Advances one step: seeds the iteration at the current state, iterates
    /// the fixed-point map under the configured termination rule, and adopts
    /// the final iterate as the state at `t + dt`.
    pub fn step(&mut self) -> Result<&IterationStats, StepError> {
        let pre = self.precompute_step()?;
        let mut w = self.state.clone();
        let mut diffs: Vec<f64> = Vec::new();
        let mut initial_diff: Option<f64> = None;
        let limit = match self.config.mode() {
            IterationMode::FixedCount(count) => count,
            IterationMode::Tolerance { max_iterations, .. } => max_iterations,
        };
        let mut converged = false;
        for iteration in 1..=limit {
            let next = self.apply_fixed_point_map(&w, &pre)?;
            let diff = spectral::discrete_l2_distance(&next, &w)?;
            let first = *initial_diff.get_or_insert(diff);
            diffs.push(diff);
            if first > 0.0 && diff > DIVERGENCE_FACTOR * first {
                return Err(StepError::Diverged {
                    iteration,
                    diff_norm: diff,
                    initial_diff: first,
                });
            }
            let prev_norm = spectral::discrete_l2(&w);
            w = next;
            if let IterationMode::Tolerance { rel_tol, .. } = self.config.mode() {
                if diff <= rel_tol * prev_norm.max(1.0) {
                    converged = true;
                    break;
                }
            }
        }
        if let IterationMode::Tolerance { max_iterations, .. } = self.config.mode() {
            if !converged {
                return Err(StepError::MaxIterationsExceeded {
                    limit: max_iterations,
                    last_diff: diffs.last().copied().unwrap_or(0.0),
                });
            }
        }
        self.state = w;
        self.steps_taken += 1;
        let iterations = diffs.len();
        self.last_stats = Some(IterationStats {
            diff_norms: diffs,
            iterations,
        });
        Ok(self.last_stats.as_ref().expect("stats were just stored"))
    }

    /// Steps until the session time reaches `t_end` to within `dt/2`; the
    /// step size is never shortened, so the final time can differ from
    /// `t_end` by up to half a step.
    ///
    /// The observer receives `(time, state, stats)` before the first step and
    /// after every `observe_every`-th step; `stats` is `None` for the initial
    /// snapshot. Step errors are wrapped in [`StepError::AtStep`] with the
    /// 1-based index of the failing step within this call.
    pub fn integrate<F>(
        &mut self,
        t_end: f64,
        observe_every: u64,
        mut observer: F,
    ) -> Result<IntegrationSummary, StepError>
    where
        F: FnMut(f64, &Field, Option<&IterationStats>),
    {
        if observe_every == 0 {
            return Err(StepError::InvalidCadence);
        }
        if t_end < self.time() {
            return Err(StepError::TimeTargetInPast {
                t_end,
                current: self.time(),
            });
        }
        observer(self.time(), &self.state, None);
        let mut steps: u64 = 0;
        let mut observations: u64 = 1;
        let dt = self.config.dt();
        while self.time() < t_end - 0.5 * dt {
            self.step().map_err(|error| StepError::AtStep {
                index: steps + 1,
                error: alloc::boxed::Box::new(error),
            })?;
            steps += 1;
            if steps % observe_every == 0 {
                observer(self.time(), &self.state, self.last_stats.as_ref());
                observations += 1;
            }
        }
        Ok(IntegrationSummary {
            steps,
            final_time: self.time(),
            observations,
        })
    }
}

fn add_fields(a: &Field, b: &Field) -> Field {
    debug_assert_eq!(a.n_components(), b.n_components());
    debug_assert_eq!(a.n_points(), b.n_points());
    let components = a
        .components()
        .iter()
        .zip(b.components())
        .map(|(ca, cb)| ca.iter().zip(cb).map(|(&x, &y)| x + y).collect())
        .collect();
    Field::new(components).expect("operands share a shape")
}

fn add_spectra(a: &Spectrum, b: &Spectrum) -> Spectrum {
    debug_assert_eq!(a.n_components(), b.n_components());
    debug_assert_eq!(a.n_points(), b.n_points());
    let components = a
        .components()
        .iter()
        .zip(b.components())
        .map(|(ca, cb)| ca.iter().zip(cb).map(|(&x, &y)| x + y).collect())
        .collect();
    Spectrum::new(components).expect("operands share a shape")
}
