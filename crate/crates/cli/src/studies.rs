//! The two study subcommands: a filter-norm sweep over step sizes and an
//! NLS soliton accuracy study, both emitting small CSV files.

use std::fs;
use std::path::Path;

use wnwe_core::diagnostics::{error_vs_reference, fit_scaling_exponent, observed_order, ErrorNorms};
use wnwe_core::equations::{nls_envelope_soliton, InitialCondition};
use wnwe_core::{nls_system, SolverSession, SpectralGrid, StepConfig};

use crate::runner::RunError;

/// Log-spaced values between `lo` and `hi` inclusive.
pub fn log_spaced(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| (llo + (lhi - llo) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

/// Sweeps the filter operator norm over log-spaced step sizes, writes
/// `dt,norm_b` rows to `out`, and returns the fitted and expected slopes.
pub fn norm_scan(
    system: &wnwe_core::EquationSystem,
    grid: &SpectralGrid,
    dt_min: f64,
    dt_max: f64,
    points: usize,
    out: &Path,
    force: bool,
) -> Result<(f64, f64), RunError> {
    if out.exists() && !force {
        return Err(RunError::OutputExists(out.to_path_buf()));
    }
    let dts = log_spaced(dt_min, dt_max, points);
    let fit = fit_scaling_exponent(system, grid, &dts)?;
    let mut text = String::from("dt,norm_b\n");
    for (dt, norm) in fit.dt_values.iter().zip(&fit.norm_values) {
        text.push_str(&format!("{dt},{norm}\n"));
    }
    fs::write(out, text)?;
    Ok((fit.slope, fit.expected_slope))
}

/// One soliton accuracy measurement: integrates the stationary envelope
/// soliton to `t_end` in tolerance mode and measures the error against the
/// closed form at the reached time.
#[allow(clippy::too_many_arguments)]
pub fn soliton_error_at_dt(
    a: f64,
    mu: f64,
    nu: f64,
    n: usize,
    period: f64,
    t_end: f64,
    dt: f64,
    tolerance: f64,
) -> Result<ErrorNorms, RunError> {
    let system = nls_system(mu, nu)?;
    let grid = SpectralGrid::new(n, period)?;
    let config = StepConfig::with_tolerance(dt, tolerance, 25)?;
    let ic = InitialCondition::nls_sech(a, nu)?;
    let initial = ic.sample(&grid);
    let mut session = SolverSession::new(system, grid.clone(), config, initial)?;
    while session.time() < t_end - 0.5 * dt {
        session.step()?;
    }
    let t = session.time();
    let norms = error_vs_reference(session.state().component(0), &grid, |x| {
        nls_envelope_soliton(a, 0.0, mu, nu, x, t)
    })?;
    Ok(norms)
}

/// Runs the accuracy study over a list of step sizes, writes `dt,linf,l2`
/// rows to `out`, and returns the observed orders between consecutive pairs.
#[allow(clippy::too_many_arguments)]
pub fn soliton_error_study(
    a: f64,
    mu: f64,
    nu: f64,
    n: usize,
    period: f64,
    t_end: f64,
    dts: &[f64],
    tolerance: f64,
    out: &Path,
    force: bool,
) -> Result<Vec<f64>, RunError> {
    if out.exists() && !force {
        return Err(RunError::OutputExists(out.to_path_buf()));
    }
    let mut rows = String::from("dt,linf,l2\n");
    let mut errors = Vec::with_capacity(dts.len());
    for &dt in dts {
        let norms = soliton_error_at_dt(a, mu, nu, n, period, t_end, dt, tolerance)?;
        rows.push_str(&format!("{dt},{},{}\n", norms.linf, norms.l2));
        errors.push(norms.linf);
    }
    fs::write(out, rows)?;
    let mut orders = Vec::new();
    for pair in errors.windows(2) {
        if let Ok(order) = observed_order(pair[0], pair[1]) {
            orders.push(order);
        }
    }
    Ok(orders)
}
