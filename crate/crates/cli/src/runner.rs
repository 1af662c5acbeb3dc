//! Executes a validated run: builds the session, integrates, and writes
//! `run.meta`, per-step `diagnostics.csv` rows, and snapshot files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use wnwe_core::diagnostics::{invariants, DiagnosticsError};
use wnwe_core::equations::{sge_reconstruct, InitialCondition, SystemError};
use wnwe_core::spectral::SpectralError;
use wnwe_core::stepper::StepError;
use wnwe_core::SolverSession;

use crate::config::{Equation, IcSpec, IterationSetting, RunSpec};
use crate::snapshot::{write_snapshot, SnapshotError, SnapshotMeta};
use crate::table::{load_initial_condition, TableError};

#[derive(Debug)]
pub enum RunError {
    MissingOutDir,
    OutputExists(PathBuf),
    Io(std::io::Error),
    Snapshot(SnapshotError),
    Table(TableError),
    System(SystemError),
    Spectral(SpectralError),
    Step(StepError),
    Diagnostics(DiagnosticsError),
    /// A step failed during integration; `run.meta` records the step index.
    Diverged { step: u64, error: StepError },
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::MissingOutDir => write!(f, "no output directory configured (set out_dir)"),
            RunError::OutputExists(p) => write!(
                f,
                "output {} already exists; pass --force to overwrite",
                p.display()
            ),
            RunError::Io(e) => write!(f, "{e}"),
            RunError::Snapshot(e) => write!(f, "{e}"),
            RunError::Table(e) => write!(f, "initial condition table: {e}"),
            RunError::System(e) => write!(f, "{e}"),
            RunError::Spectral(e) => write!(f, "{e}"),
            RunError::Step(e) => write!(f, "{e}"),
            RunError::Diagnostics(e) => write!(f, "{e}"),
            RunError::Diverged { step, error } => {
                write!(f, "solver failed at step {step}: {error}")
            }
        }
    }
}

impl std::error::Error for RunError {}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}
impl From<SnapshotError> for RunError {
    fn from(e: SnapshotError) -> Self {
        RunError::Snapshot(e)
    }
}
impl From<TableError> for RunError {
    fn from(e: TableError) -> Self {
        RunError::Table(e)
    }
}
impl From<SystemError> for RunError {
    fn from(e: SystemError) -> Self {
        RunError::System(e)
    }
}
impl From<SpectralError> for RunError {
    fn from(e: SpectralError) -> Self {
        RunError::Spectral(e)
    }
}
impl From<StepError> for RunError {
    fn from(e: StepError) -> Self {
        RunError::Step(e)
    }
}
impl From<DiagnosticsError> for RunError {
    fn from(e: DiagnosticsError) -> Self {
        RunError::Diagnostics(e)
    }
}

impl RunError {
    /// True when the solver itself failed (as opposed to configuration or
    /// IO); mapped to a distinct exit code by the CLI.
    pub fn is_solver_failure(&self) -> bool {
        matches!(self, RunError::Diverged { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub steps: u64,
    pub final_time: f64,
    pub snapshots: u64,
    pub out_dir: PathBuf,
}

pub fn snapshot_path(out_dir: &Path, step: u64) -> PathBuf {
    out_dir.join(format!("snapshot_{step:06}.csv"))
}

fn build_initial_condition(spec: &RunSpec) -> Result<InitialCondition, RunError> {
    let ic = match &spec.ic {
        IcSpec::NlsSech { b, nu } => InitialCondition::nls_sech(*b, *nu)?,
        IcSpec::KdvGaussian { c1, c2 } => InitialCondition::kdv_gaussian(*c1, *c2)?,
        IcSpec::SgeZero => InitialCondition::sge_zero(),
        IcSpec::Custom { path } => {
            load_initial_condition(path, spec.equation.n_components())?
        }
    };
    Ok(ic)
}

/// Runs the integration described by `spec`, writing all outputs under
/// `spec.out_dir`. With `force`, previous outputs in the directory are
/// removed first; otherwise their presence is an error.
pub fn run(spec: &RunSpec, force: bool) -> Result<RunOutcome, RunError> {
    let out_dir = spec.out_dir.clone().ok_or(RunError::MissingOutDir)?;
    let system = spec.build_system()?;
    let grid = spec.build_grid()?;
    let config = spec.build_step_config()?;
    let ic = build_initial_condition(spec)?;
    if ic.n_components() != system.n_components() {
        return Err(RunError::System(SystemError::ComponentMismatch {
            expected: system.n_components(),
            found: ic.n_components(),
        }));
    }
    let initial = ic.sample(&grid);

    fs::create_dir_all(&out_dir)?;
    let meta_path = out_dir.join("run.meta");
    let diag_path = out_dir.join("diagnostics.csv");
    if force {
        remove_previous_outputs(&out_dir)?;
    } else {
        for p in [&meta_path, &diag_path] {
            if p.exists() {
                return Err(RunError::OutputExists(p.clone()));
            }
        }
        if snapshot_path(&out_dir, 0).exists() {
            return Err(RunError::OutputExists(snapshot_path(&out_dir, 0)));
        }
    }

    let invariant_names: Vec<&'static str> = invariants(&system, &initial, &grid)
        .iter()
        .map(|(name, _)| *name)
        .collect();
    let mut diag = String::new();
    diag.push_str("time");
    for name in &invariant_names {
        diag.push(',');
        diag.push_str(name);
    }
    diag.push_str(",iterations,max_ratio\n");

    let mut session = SolverSession::new(system, grid, config, initial)?;
    let mut snapshots: u64 = 0;

    let mut emit = |session: &SolverSession,
                    diag: &mut String,
                    snapshots: &mut u64,
                    step: u64|
     -> Result<(), RunError> {
        let time = session.time();
        diag.push_str(&format!("{time}"));
        for (_, value) in invariants(session.system(), session.state(), session.grid()) {
            diag.push_str(&format!(",{value}"));
        }
        match session.last_stats() {
            Some(stats) if step > 0 => {
                diag.push_str(&format!(",{}", stats.iterations()));
                match stats.max_ratio() {
                    Some(r) => diag.push_str(&format!(",{r}")),
                    None => diag.push(','),
                }
            }
            _ => diag.push_str(",0,"),
        }
        diag.push('\n');

        if step % spec.snapshot_every == 0 {
            let meta = SnapshotMeta {
                equation: spec.equation.name().to_string(),
                dt: spec.dt,
                t: time,
            };
            let reconstructed;
            let derived = if spec.equation == Equation::Sge {
                reconstructed = sge_reconstruct(
                    session.state().component(0),
                    session.state().component(1),
                )
                .expect("components share a length");
                Some(("u", reconstructed.as_slice()))
            } else {
                None
            };
            write_snapshot(
                &snapshot_path(&out_dir, step),
                session.grid(),
                session.state(),
                &meta,
                derived,
            )?;
            *snapshots += 1;
        }
        Ok(())
    };

    emit(&session, &mut diag, &mut snapshots, 0)?;

    let dt = spec.dt;
    let mut steps: u64 = 0;
    let mut failure: Option<RunError> = None;
    while session.time() < spec.t_end - 0.5 * dt {
        match session.step() {
            Ok(_) => {
                steps += 1;
                emit(&session, &mut diag, &mut snapshots, steps)?;
            }
            Err(error) => {
                failure = Some(RunError::Diverged {
                    step: steps + 1,
                    error,
                });
                break;
            }
        }
    }

    fs::write(&diag_path, diag)?;
    write_meta(&meta_path, spec, steps, session.time(), snapshots, failure.as_ref())?;

    match failure {
        Some(err) => Err(err),
        None => Ok(RunOutcome {
            steps,
            final_time: session.time(),
            snapshots,
            out_dir,
        }),
    }
}

fn remove_previous_outputs(out_dir: &Path) -> Result<(), RunError> {
    for name in ["run.meta", "diagnostics.csv"] {
        let p = out_dir.join(name);
        if p.exists() {
            fs::remove_file(&p)?;
        }
    }
    for entry in fs::read_dir(out_dir)? {
        let entry = entry?;
        let name = entry.file_name();
        let name = name.to_string_lossy();
        if name.starts_with("snapshot_") && name.ends_with(".csv") {
            fs::remove_file(entry.path())?;
        }
    }
    Ok(())
}

fn write_meta(
    path: &Path,
    spec: &RunSpec,
    steps: u64,
    final_time: f64,
    snapshots: u64,
    failure: Option<&RunError>,
) -> Result<(), RunError> {
    let mut text = String::new();
    text.push_str("# wnwe run metadata\n");
    text.push_str(&format!("version = {}\n", env!("CARGO_PKG_VERSION")));
    text.push_str(&format!(
        "status = {}\n",
        if failure.is_some() {
            "diverged"
        } else {
            "completed"
        }
    ));
    text.push_str(&format!("equation = {}\n", spec.equation.name()));
    text.push_str(&format!("n = {}\n", spec.n_points));
    text.push_str(&format!("period = {:e}\n", spec.period));
    text.push_str(&format!("dt = {:e}\n", spec.dt));
    text.push_str(&format!("t_end = {:e}\n", spec.t_end));
    match spec.iteration {
        IterationSetting::Fixed(count) => {
            text.push_str(&format!("iterations = {count}\n"));
        }
        IterationSetting::Tolerance {
            tol,
            max_iterations,
        } => {
            text.push_str(&format!("tolerance = {tol:e}\n"));
            text.push_str(&format!("max_iterations = {max_iterations}\n"));
        }
    }
    text.push_str(&format!(
        "nyquist = {}\n",
        match spec.nyquist {
            wnwe_core::NyquistPolicy::Paper => "paper",
            wnwe_core::NyquistPolicy::Zero => "zero",
        }
    ));
    match spec.equation {
        Equation::Kdv => {
            text.push_str(&format!("epsilon = {:e}\n", spec.epsilon));
            text.push_str(&format!("beta = {:e}\n", spec.beta));
        }
        Equation::Nls => {
            text.push_str(&format!("mu = {:e}\n", spec.mu));
            text.push_str(&format!("nu = {:e}\n", spec.nu));
        }
        Equation::Sge => {}
    }
    text.push_str(&format!("ic = {}\n", spec.ic.name()));
    match &spec.ic {
        IcSpec::NlsSech { b, nu } => {
            text.push_str(&format!("b = {b:e}\n"));
            text.push_str(&format!("ic_nu = {nu:e}\n"));
        }
        IcSpec::KdvGaussian { c1, c2 } => {
            text.push_str(&format!("c1 = {c1:e}\n"));
            text.push_str(&format!("c2 = {c2:e}\n"));
        }
        IcSpec::SgeZero => {}
        IcSpec::Custom { path } => {
            text.push_str(&format!("ic_file = {}\n", path.display()));
        }
    }
    text.push_str(&format!("snapshot_every = {}\n", spec.snapshot_every));
    text.push_str(&format!("seed = {}\n", spec.seed));
    text.push_str(&format!(
        "defaults_applied = {}\n",
        if spec.defaults_applied.is_empty() {
            "none".to_string()
        } else {
            spec.defaults_applied.join(" ")
        }
    ));
    text.push_str(&format!("steps = {steps}\n"));
    text.push_str(&format!("final_time = {final_time:e}\n"));
    text.push_str(&format!("snapshots = {snapshots}\n"));
    if let Some(RunError::Diverged { step, error }) = failure {
        text.push_str(&format!("failed_step = {step}\n"));
        text.push_str(&format!("error = {error}\n"));
    }

    let mut file = fs::File::create(path)?;
    file.write_all(text.as_bytes())?;
    Ok(())
}
