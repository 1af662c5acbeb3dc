//! Numerical verification utilities: filter-norm scaling in the step size,
//! conserved-quantity evaluation, PDE residual oracles, error measurement
//! against reference solutions, and observed temporal order.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::equations::EquationSystem;
use crate::spectral::{
    apply_multiplier, derivative_diagonal, dft_forward, dft_inverse, Field, NyquistPolicy,
    SpectralError, SpectralGrid,
};
use crate::stepper::{build_multipliers, StepError};

#[derive(Debug, Clone, PartialEq)]
pub enum DiagnosticsError {
    /// The sweep needs at least this many step sizes.
    TooFewPoints { found: usize, required: usize },
    /// Step sizes must be positive and strictly increasing.
    InvalidSweep,
    /// A quantity that must be positive was not.
    NonPositiveValue { what: &'static str },
    /// All norms coincide; no slope can be fitted.
    DegenerateFit,
    /// The continuous maximizer of the filter symbol lies beyond the largest
    /// grid wavenumber at this step size, so the measured norm would
    /// understate the true operator norm.
    MaximizerBeyondGrid { dt: f64 },
    /// Operand length does not match the grid.
    ShapeMismatch { expected: usize, found: usize },
    /// A residual stencil needs at least three snapshots.
    TooFewSnapshots { found: usize },
    Step(StepError),
    Spectral(SpectralError),
}

impl core::fmt::Display for DiagnosticsError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DiagnosticsError::TooFewPoints { found, required } => {
                write!(f, "sweep has {found} points, needs at least {required}")
            }
            DiagnosticsError::InvalidSweep => {
                write!(f, "step sizes must be positive and strictly increasing")
            }
            DiagnosticsError::NonPositiveValue { what } => {
                write!(f, "{what} must be positive")
            }
            DiagnosticsError::DegenerateFit => write!(f, "all norms equal; fit is degenerate"),
            DiagnosticsError::MaximizerBeyondGrid { dt } => write!(
                f,
                "at dt = {dt} the filter symbol still grows at the largest grid wavenumber; \
                 refine the grid or shrink the sweep"
            ),
            DiagnosticsError::ShapeMismatch { expected, found } => {
                write!(f, "expected {expected} samples, found {found}")
            }
            DiagnosticsError::TooFewSnapshots { found } => {
                write!(f, "need at least 3 snapshots, found {found}")
            }
            DiagnosticsError::Step(e) => write!(f, "{e}"),
            DiagnosticsError::Spectral(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for DiagnosticsError {}

impl From<StepError> for DiagnosticsError {
    fn from(e: StepError) -> Self {
        DiagnosticsError::Step(e)
    }
}

impl From<SpectralError> for DiagnosticsError {
    fn from(e: SpectralError) -> Self {
        DiagnosticsError::Spectral(e)
    }
}

/// Discrete L2 operator norm of the filter: the largest `|filter factor|`
/// over components and grid modes. The Fourier basis is orthogonal in every
/// Sobolev inner product, so the same maximum gives the norm on each of
/// them.
pub fn operator_norm_b(
    system: &EquationSystem,
    grid: &SpectralGrid,
    dt: f64,
) -> Result<f64, DiagnosticsError> {
    Ok(build_multipliers(system, grid, dt, NyquistPolicy::Paper)?.max_abs_filter())
}

/// A fitted power law `norm ~ dt^slope` with the predicted exponent
/// `degree_gap / linear_degree` alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub dt_values: Vec<f64>,
    pub norm_values: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub expected_slope: f64,
}

/// Measures `operator_norm_b` over a sweep of step sizes and fits the
/// log-log slope.
///
/// For systems whose nonlinear symbol has degree >= 1 the maximizer of the
/// continuous filter symbol moves to larger wavenumbers as `dt` shrinks;
/// the fit is refused when the measured maximum sits at the grid edge while
/// the continuous symbol still grows beyond it.
pub fn fit_scaling_exponent(
    system: &EquationSystem,
    grid: &SpectralGrid,
    dt_values: &[f64],
) -> Result<ScalingFit, DiagnosticsError> {
    if dt_values.len() < 4 {
        return Err(DiagnosticsError::TooFewPoints {
            found: dt_values.len(),
            required: 4,
        });
    }
    for pair in dt_values.windows(2) {
        if pair[1] <= pair[0] {
            return Err(DiagnosticsError::InvalidSweep);
        }
    }
    if dt_values[0] <= 0.0 {
        return Err(DiagnosticsError::InvalidSweep);
    }

    let needs_guard = (0..system.n_components())
        .any(|i| system.nonlinear_symbol(i).degree() >= 1);
    let mut norms = Vec::with_capacity(dt_values.len());
    for &dt in dt_values {
        if needs_guard {
            guard_interior_maximizer(system, grid, dt)?;
        }
        norms.push(operator_norm_b(system, grid, dt)?);
    }
    if norms.iter().any(|&n| n <= 0.0) {
        return Err(DiagnosticsError::NonPositiveValue {
            what: "operator norm",
        });
    }
    let (slope, intercept) = fit_loglog(dt_values, &norms)?;
    Ok(ScalingFit {
        dt_values: dt_values.to_vec(),
        norm_values: norms,
        slope,
        intercept,
        expected_slope: system.degree_gap() as f64 / system.linear_degree() as f64,
    })
}

/// Least-squares line through `(ln x, ln y)`; returns `(slope, intercept)`.
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> Result<(f64, f64), DiagnosticsError> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(DiagnosticsError::TooFewPoints {
            found: xs.len().min(ys.len()),
            required: 2,
        });
    }
    if xs.iter().chain(ys).any(|&v| v <= 0.0 || !v.is_finite()) {
        return Err(DiagnosticsError::NonPositiveValue {
            what: "log-log fit input",
        });
    }
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|&x| libm::log(x)).collect();
    let ly: Vec<f64> = ys.iter().map(|&y| libm::log(y)).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in lx.iter().zip(&ly) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(DiagnosticsError::DegenerateFit);
    }
    if sxy == 0.0 {
        return Err(DiagnosticsError::DegenerateFit);
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

fn guard_interior_maximizer(
    system: &EquationSystem,
    grid: &SpectralGrid,
    dt: f64,
) -> Result<(), DiagnosticsError> {
    let d = 0.5 * dt;
    let kappa_max = grid.max_wavenumber();
    for i in 0..system.n_components() {
        if system.nonlinear_symbol(i).degree() < 1 {
            continue;
        }
        let eval = |kappa: f64| -> f64 {
            let numer = d * system.nonlinear_symbol(i).eval_at_i_kappa(kappa);
            let denom = Complex64::new(1.0, 0.0)
                - d * system.linear_symbol(i).eval_at_i_kappa(kappa);
            (numer / denom).norm()
        };
        let mut best = 0.0_f64;
        let mut best_kappa = 0.0_f64;
        for &kappa in grid.wavenumbers() {
            let v = eval(kappa);
            if v > best {
                best = v;
                best_kappa = kappa;
            }
        }
        let at_edge = libm::fabs(libm::fabs(best_kappa) - kappa_max) < 1e-12 * kappa_max;
        if at_edge && eval(1.05 * kappa_max) > best {
            return Err(DiagnosticsError::MaximizerBeyondGrid { dt });
        }
    }
    Ok(())
}

/// Conserved quantities of the built-in systems via the periodic trapezoid
/// rule (spacing times sample sum): for KdV the integrals of `u` and `u^2`,
/// for NLS the mass `int |u|^2`, for Sine-Gordon (and any other system) the
/// summed squared L2 content of the components.
pub fn invariants(
    system: &EquationSystem,
    field: &Field,
    grid: &SpectralGrid,
) -> Vec<(&'static str, f64)> {
    let h = grid.spacing();
    match system.name() {
        "kdv" => {
            let u = field.component(0);
            let int_u: f64 = u.iter().map(|z| z.re).sum::<f64>() * h;
            let int_u2: f64 = u.iter().map(|z| (z * z).re).sum::<f64>() * h;
            alloc::vec![("int_u", int_u), ("int_u2", int_u2)]
        }
        "nls" => {
            let mass: f64 = field.component(0).iter().map(|z| z.norm_sqr()).sum::<f64>() * h;
            alloc::vec![("mass", mass)]
        }
        _ => {
            let total: f64 = field
                .components()
                .iter()
                .flat_map(|c| c.iter())
                .map(|z| z.norm_sqr())
                .sum::<f64>()
                * h;
            alloc::vec![("l2_sq", total)]
        }
    }
}

/// Three consecutive equally spaced snapshots of a scalar state, the inputs
/// of the centered second-difference residual stencil.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotTriple {
    before: Vec<Complex64>,
    middle: Vec<Complex64>,
    after: Vec<Complex64>,
    dt: f64,
}

impl SnapshotTriple {
    pub fn new(
        before: Vec<Complex64>,
        middle: Vec<Complex64>,
        after: Vec<Complex64>,
        dt: f64,
    ) -> Result<Self, DiagnosticsError> {
        if before.len() != middle.len() || after.len() != middle.len() {
            return Err(DiagnosticsError::ShapeMismatch {
                expected: middle.len(),
                found: before.len().max(after.len()),
            });
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(DiagnosticsError::NonPositiveValue {
                what: "snapshot spacing",
            });
        }
        Ok(Self {
            before,
            middle,
            after,
            dt,
        })
    }

    /// Picks the centered triple of a series of three or more equally spaced
    /// snapshots.
    pub fn from_series(
        snapshots: &[Vec<Complex64>],
        dt: f64,
    ) -> Result<Self, DiagnosticsError> {
        if snapshots.len() < 3 {
            return Err(DiagnosticsError::TooFewSnapshots {
                found: snapshots.len(),
            });
        }
        let mid = snapshots.len() / 2;
        Self::new(
            snapshots[mid - 1].clone(),
            snapshots[mid].clone(),
            snapshots[mid + 1].clone(),
            dt,
        )
    }

    pub fn middle(&self) -> &[Complex64] {
        &self.middle
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }
}

/// Residual of the second-order form `u_tt = u_xx + gamma(u)`, evaluated at
/// the middle snapshot with a centered second difference in time and
/// spectral differentiation in space.
pub fn pde_residual_second_order(
    triple: &SnapshotTriple,
    grid: &SpectralGrid,
    gamma: impl Fn(Complex64) -> Complex64,
) -> Result<Vec<Complex64>, DiagnosticsError> {
    if triple.middle.len() != grid.n_points() {
        return Err(DiagnosticsError::ShapeMismatch {
            expected: grid.n_points(),
            found: triple.middle.len(),
        });
    }
    let hat = dft_forward(&Field::scalar(triple.middle.clone()), grid)?;
    let second = derivative_diagonal(grid, 2, NyquistPolicy::Paper);
    let dxx_hat = apply_multiplier(&hat, core::slice::from_ref(&second))?;
    let dxx = dft_inverse(&dxx_hat, grid)?;
    let inv_dt2 = 1.0 / (triple.dt * triple.dt);
    Ok((0..grid.n_points())
        .map(|j| {
            let u_tt = (triple.before[j] - 2.0 * triple.middle[j] + triple.after[j]) * inv_dt2;
            u_tt - dxx.component(0)[j] - gamma(triple.middle[j])
        })
        .collect())
}

/// Pointwise error of a sampled state against a reference evaluator:
/// maximum magnitude and root-mean-square over the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    pub linf: f64,
    pub l2: f64,
}

pub fn error_vs_reference(
    samples: &[Complex64],
    grid: &SpectralGrid,
    reference: impl Fn(f64) -> Complex64,
) -> Result<ErrorNorms, DiagnosticsError> {
    if samples.len() != grid.n_points() {
        return Err(DiagnosticsError::ShapeMismatch {
            expected: grid.n_points(),
            found: samples.len(),
        });
    }
    let mut linf = 0.0_f64;
    let mut sum_sq = 0.0_f64;
    for (&x, &z) in grid.sample_points().iter().zip(samples) {
        let err = (z - reference(x)).norm();
        if err > linf {
            linf = err;
        }
        sum_sq += err * err;
    }
    Ok(ErrorNorms {
        linf,
        l2: libm::sqrt(sum_sq / grid.n_points() as f64),
    })
}

/// Observed convergence order from errors at `dt` and `dt/2`:
/// `log2(err_coarse / err_fine)`.
pub fn observed_order(err_coarse: f64, err_fine: f64) -> Result<f64, DiagnosticsError> {
    if !(err_coarse > 0.0) || !err_coarse.is_finite() {
        return Err(DiagnosticsError::NonPositiveValue { what: "coarse error" });
    }
    if !(err_fine > 0.0) || !err_fine.is_finite() {
        return Err(DiagnosticsError::NonPositiveValue { what: "fine error" });
    }
    Ok(libm::log2(err_coarse / err_fine))
}
