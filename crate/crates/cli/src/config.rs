//! Run configuration: line-oriented `key = value` files with `#` comments,
//! `--key value` flag overrides, per-equation defaults, and validation.
//!
//! Flags win over file values; omitted keys fall back to the reference
//! defaults of the chosen equation, and every applied default is recorded
//! for the run metadata.

use std::collections::BTreeMap;
use std::path::PathBuf;

use wnwe_core::spectral::NyquistPolicy;

pub const KNOWN_KEYS: &[&str] = &[
    "equation",
    "n",
    "period",
    "dt",
    "t_end",
    "iterations",
    "tolerance",
    "max_iterations",
    "nyquist",
    "ic",
    "ic_file",
    "b",
    "c1",
    "c2",
    "epsilon",
    "beta",
    "mu",
    "nu",
    "snapshot_every",
    "out_dir",
    "seed",
];

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    MalformedLine { line: usize },
    UnknownKey { key: String, line: Option<usize> },
    InvalidValue { key: String, line: Option<usize>, message: String },
    MissingKey { key: &'static str },
    ConflictingKeys { first: &'static str, second: &'static str },
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let at = |line: &Option<usize>| match line {
            Some(l) => format!(" (line {l})"),
            None => String::new(),
        };
        match self {
            ConfigError::MalformedLine { line } => {
                write!(f, "line {line}: expected `key = value`")
            }
            ConfigError::UnknownKey { key, line } => {
                write!(f, "unknown key `{key}`{}", at(line))
            }
            ConfigError::InvalidValue { key, line, message } => {
                write!(f, "invalid value for `{key}`{}: {message}", at(line))
            }
            ConfigError::MissingKey { key } => write!(f, "missing required key `{key}`"),
            ConfigError::ConflictingKeys { first, second } => {
                write!(f, "`{first}` and `{second}` cannot both be set")
            }
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigEntry {
    pub key: String,
    pub value: String,
    pub line: Option<usize>,
}

/// Parses `key = value` lines; `#` starts a comment, blank lines are
/// skipped, later occurrences of a key override earlier ones.
pub fn parse_config_text(text: &str) -> Result<Vec<ConfigEntry>, ConfigError> {
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = raw.split('#').next().unwrap_or("").trim();
        if stripped.is_empty() {
            continue;
        }
        let (key, value) = stripped
            .split_once('=')
            .ok_or(ConfigError::MalformedLine { line })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::MalformedLine { line });
        }
        entries.push(ConfigEntry {
            key,
            value,
            line: Some(line),
        });
    }
    Ok(entries)
}

/// Raw flag values; every field mirrors a config key and overrides it.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub equation: Option<String>,
    pub n: Option<String>,
    pub period: Option<String>,
    pub dt: Option<String>,
    pub t_end: Option<String>,
    pub iterations: Option<String>,
    pub tolerance: Option<String>,
    pub max_iterations: Option<String>,
    pub nyquist: Option<String>,
    pub ic: Option<String>,
    pub ic_file: Option<String>,
    pub b: Option<String>,
    pub c1: Option<String>,
    pub c2: Option<String>,
    pub epsilon: Option<String>,
    pub beta: Option<String>,
    pub mu: Option<String>,
    pub nu: Option<String>,
    pub snapshot_every: Option<String>,
    pub out_dir: Option<String>,
    pub seed: Option<String>,
}

impl Overrides {
    fn entries(&self) -> Vec<ConfigEntry> {
        let mut out = Vec::new();
        let mut push = |key: &str, v: &Option<String>| {
            if let Some(value) = v {
                out.push(ConfigEntry {
                    key: key.to_string(),
                    value: value.clone(),
                    line: None,
                });
            }
        };
        push("equation", &self.equation);
        push("n", &self.n);
        push("period", &self.period);
        push("dt", &self.dt);
        push("t_end", &self.t_end);
        push("iterations", &self.iterations);
        push("tolerance", &self.tolerance);
        push("max_iterations", &self.max_iterations);
        push("nyquist", &self.nyquist);
        push("ic", &self.ic);
        push("ic_file", &self.ic_file);
        push("b", &self.b);
        push("c1", &self.c1);
        push("c2", &self.c2);
        push("epsilon", &self.epsilon);
        push("beta", &self.beta);
        push("mu", &self.mu);
        push("nu", &self.nu);
        push("snapshot_every", &self.snapshot_every);
        push("out_dir", &self.out_dir);
        push("seed", &self.seed);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    Kdv,
    Nls,
    Sge,
}

impl Equation {
    pub fn name(&self) -> &'static str {
        match self {
            Equation::Kdv => "kdv",
            Equation::Nls => "nls",
            Equation::Sge => "sge",
        }
    }

    pub fn n_components(&self) -> usize {
        match self {
            Equation::Sge => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IterationSetting {
    Fixed(usize),
    Tolerance { tol: f64, max_iterations: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum IcSpec {
    NlsSech { b: f64, nu: f64 },
    KdvGaussian { c1: f64, c2: f64 },
    SgeZero,
    Custom { path: PathBuf },
}

impl IcSpec {
    pub fn name(&self) -> &'static str {
        match self {
            IcSpec::NlsSech { .. } => "nls_sech",
            IcSpec::KdvGaussian { .. } => "kdv_gaussian",
            IcSpec::SgeZero => "sge_zero",
            IcSpec::Custom { .. } => "custom",
        }
    }
}

/// A fully validated run description. All numeric fields hold resolved
/// values; `defaults_applied` lists the keys that fell back to defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub equation: Equation,
    pub n_points: usize,
    pub period: f64,
    pub dt: f64,
    pub t_end: f64,
    pub iteration: IterationSetting,
    pub nyquist: NyquistPolicy,
    pub ic: IcSpec,
    pub epsilon: f64,
    pub beta: f64,
    pub mu: f64,
    pub nu: f64,
    pub snapshot_every: u64,
    pub out_dir: Option<PathBuf>,
    pub seed: u64,
    pub defaults_applied: Vec<String>,
}

struct Resolver {
    map: BTreeMap<String, (String, Option<usize>)>,
    defaults: Vec<String>,
}

impl Resolver {
    fn take_raw(&mut self, key: &str) -> Option<(String, Option<usize>)> {
        self.map.remove(key)
    }

    fn parse<T: std::str::FromStr>(
        key: &str,
        value: &str,
        line: Option<usize>,
        what: &str,
    ) -> Result<T, ConfigError> {
        value.parse().map_err(|_| ConfigError::InvalidValue {
            key: key.to_string(),
            line,
            message: format!("`{value}` is not {what}"),
        })
    }

    fn f64_with_default(
        &mut self,
        key: &str,
        default: f64,
        check: impl Fn(f64) -> Result<(), String>,
    ) -> Result<f64, ConfigError> {
        match self.take_raw(key) {
            Some((raw, line)) => {
                let v: f64 = Self::parse(key, &raw, line, "a real number")?;
                check(v).map_err(|message| ConfigError::InvalidValue {
                    key: key.to_string(),
                    line,
                    message,
                })?;
                Ok(v)
            }
            None => {
                self.defaults.push(key.to_string());
                Ok(default)
            }
        }
    }

    fn f64_optional(
        &mut self,
        key: &str,
        check: impl Fn(f64) -> Result<(), String>,
    ) -> Result<Option<f64>, ConfigError> {
        match self.take_raw(key) {
            Some((raw, line)) => {
                let v: f64 = Self::parse(key, &raw, line, "a real number")?;
                check(v).map_err(|message| ConfigError::InvalidValue {
                    key: key.to_string(),
                    line,
                    message,
                })?;
                Ok(Some(v))
            }
            None => Ok(None),
        }
    }
}

fn check_positive(v: f64) -> Result<(), String> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(format!("must be finite and positive (got {v})"))
    }
}

fn check_nonnegative(v: f64) -> Result<(), String> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(format!("must be finite and nonnegative (got {v})"))
    }
}

/// Merges a config file and flag overrides into a validated [`RunSpec`].
pub fn resolve_run_spec(
    file_text: Option<&str>,
    overrides: &Overrides,
) -> Result<RunSpec, ConfigError> {
    let mut merged: BTreeMap<String, (String, Option<usize>)> = BTreeMap::new();
    if let Some(text) = file_text {
        for entry in parse_config_text(text)? {
            if !KNOWN_KEYS.contains(&entry.key.as_str()) {
                return Err(ConfigError::UnknownKey {
                    key: entry.key,
                    line: entry.line,
                });
            }
            merged.insert(entry.key, (entry.value, entry.line));
        }
    }
    for entry in overrides.entries() {
        // Flag keys are fixed by the CLI definition, but double-check.
        if !KNOWN_KEYS.contains(&entry.key.as_str()) {
            return Err(ConfigError::UnknownKey {
                key: entry.key,
                line: None,
            });
        }
        merged.insert(entry.key, (entry.value, None));
    }

    let mut r = Resolver {
        map: merged,
        defaults: Vec::new(),
    };

    let equation = match r.take_raw("equation") {
        Some((raw, line)) => match raw.as_str() {
            "kdv" => Equation::Kdv,
            "nls" => Equation::Nls,
            "sge" => Equation::Sge,
            other => {
                return Err(ConfigError::InvalidValue {
                    key: "equation".to_string(),
                    line,
                    message: format!("`{other}` is not one of kdv, nls, sge"),
                })
            }
        },
        None => return Err(ConfigError::MissingKey { key: "equation" }),
    };

    // Reference defaults per equation.
    let (def_n, def_period, def_dt, def_t_end, def_ic) = match equation {
        Equation::Kdv => (512usize, 20.0, 0.01, 5.0, "kdv_gaussian"),
        Equation::Nls => (1024, 2.0 * std::f64::consts::PI, 0.01, 1.0, "nls_sech"),
        Equation::Sge => (256, 2.0 * std::f64::consts::PI, 1e-3, 1.0, "sge_zero"),
    };

    let n_points = match r.take_raw("n") {
        Some((raw, line)) => {
            let v: usize = Resolver::parse("n", &raw, line, "a positive integer")?;
            if v < 4 || v % 2 != 0 || !v.is_power_of_two() {
                return Err(ConfigError::InvalidValue {
                    key: "n".to_string(),
                    line,
                    message: format!("must be an even power of two, at least 4 (got {v})"),
                });
            }
            v
        }
        None => {
            r.defaults.push("n".to_string());
            def_n
        }
    };

    let period = r.f64_with_default("period", def_period, check_positive)?;
    let dt = r.f64_with_default("dt", def_dt, check_positive)?;
    let t_end = r.f64_with_default("t_end", def_t_end, check_nonnegative)?;

    let iterations_raw = r.take_raw("iterations");
    let tolerance_raw = r.take_raw("tolerance");
    let max_iterations_raw = r.take_raw("max_iterations");
    if iterations_raw.is_some() && tolerance_raw.is_some() {
        return Err(ConfigError::ConflictingKeys {
            first: "iterations",
            second: "tolerance",
        });
    }
    if max_iterations_raw.is_some() && tolerance_raw.is_none() {
        return Err(ConfigError::InvalidValue {
            key: "max_iterations".to_string(),
            line: max_iterations_raw.and_then(|(_, l)| l),
            message: "only meaningful together with `tolerance`".to_string(),
        });
    }
    let iteration = if let Some((raw, line)) = tolerance_raw {
        let tol: f64 = Resolver::parse("tolerance", &raw, line, "a real number")?;
        check_positive(tol).map_err(|message| ConfigError::InvalidValue {
            key: "tolerance".to_string(),
            line,
            message,
        })?;
        let max_iterations = match max_iterations_raw {
            Some((raw, line)) => {
                let v: usize = Resolver::parse("max_iterations", &raw, line, "a positive integer")?;
                if v == 0 {
                    return Err(ConfigError::InvalidValue {
                        key: "max_iterations".to_string(),
                        line,
                        message: "must be at least 1".to_string(),
                    });
                }
                v
            }
            None => {
                r.defaults.push("max_iterations".to_string());
                wnwe_core::stepper::DEFAULT_MAX_ITERATIONS
            }
        };
        IterationSetting::Tolerance {
            tol,
            max_iterations,
        }
    } else if let Some((raw, line)) = iterations_raw {
        let v: usize = Resolver::parse("iterations", &raw, line, "a positive integer")?;
        if v == 0 {
            return Err(ConfigError::InvalidValue {
                key: "iterations".to_string(),
                line,
                message: "must be at least 1".to_string(),
            });
        }
        IterationSetting::Fixed(v)
    } else {
        r.defaults.push("iterations".to_string());
        IterationSetting::Fixed(wnwe_core::stepper::DEFAULT_FIXED_ITERATIONS)
    };

    let nyquist = match r.take_raw("nyquist") {
        Some((raw, line)) => match raw.as_str() {
            "paper" => NyquistPolicy::Paper,
            "zero" => NyquistPolicy::Zero,
            other => {
                return Err(ConfigError::InvalidValue {
                    key: "nyquist".to_string(),
                    line,
                    message: format!("`{other}` is not one of paper, zero"),
                })
            }
        },
        None => {
            r.defaults.push("nyquist".to_string());
            NyquistPolicy::Paper
        }
    };

    let epsilon = r.f64_with_default("epsilon", 0.05, check_positive)?;
    let beta = r.f64_with_default("beta", 1.0, |v| {
        if v.is_finite() {
            Ok(())
        } else {
            Err("must be finite".to_string())
        }
    })?;
    let mu = r.f64_with_default("mu", 1.0, check_positive)?;
    let nu = r.f64_with_default("nu", 2.0, check_positive)?;

    let ic_name = match r.take_raw("ic") {
        Some((raw, line)) => {
            if !["nls_sech", "kdv_gaussian", "sge_zero", "custom"].contains(&raw.as_str()) {
                return Err(ConfigError::InvalidValue {
                    key: "ic".to_string(),
                    line,
                    message: format!(
                        "`{raw}` is not one of nls_sech, kdv_gaussian, sge_zero, custom"
                    ),
                });
            }
            raw
        }
        None => {
            r.defaults.push("ic".to_string());
            def_ic.to_string()
        }
    };

    let ic_file = r.take_raw("ic_file");
    if ic_file.is_some() && ic_name != "custom" {
        return Err(ConfigError::InvalidValue {
            key: "ic_file".to_string(),
            line: ic_file.and_then(|(_, l)| l),
            message: "only meaningful together with `ic = custom`".to_string(),
        });
    }

    let b = r.f64_with_default("b", 3.0, |v| {
        if v.is_finite() {
            Ok(())
        } else {
            Err("must be finite".to_string())
        }
    })?;
    // Physical-coordinate transcription of the reference Gaussian bump.
    let coord_scale = period / (2.0 * std::f64::consts::PI);
    let c1 = r.f64_with_default("c1", 1.2 / coord_scale, check_nonnegative)?;
    let c2 = r.f64_with_default("c2", 1.0 / coord_scale, |v| {
        if v.is_finite() {
            Ok(())
        } else {
            Err("must be finite".to_string())
        }
    })?;

    let ic = match ic_name.as_str() {
        "nls_sech" => IcSpec::NlsSech { b, nu },
        "kdv_gaussian" => IcSpec::KdvGaussian { c1, c2 },
        "sge_zero" => IcSpec::SgeZero,
        _ => match ic_file {
            Some((raw, _)) => IcSpec::Custom {
                path: PathBuf::from(raw),
            },
            None => return Err(ConfigError::MissingKey { key: "ic_file" }),
        },
    };

    // Built-in initial conditions are tied to a component count.
    let ic_components = match &ic {
        IcSpec::SgeZero => Some(2),
        IcSpec::Custom { .. } => None, // checked when the table is loaded
        _ => Some(1),
    };
    if let Some(found) = ic_components {
        if found != equation.n_components() {
            return Err(ConfigError::InvalidValue {
                key: "ic".to_string(),
                line: None,
                message: format!(
                    "initial condition {ic_name} has {found} component(s) but {} needs {}",
                    equation.name(),
                    equation.n_components()
                ),
            });
        }
    }

    let snapshot_every = match r.take_raw("snapshot_every") {
        Some((raw, line)) => {
            let v: u64 = Resolver::parse("snapshot_every", &raw, line, "a positive integer")?;
            if v == 0 {
                return Err(ConfigError::InvalidValue {
                    key: "snapshot_every".to_string(),
                    line,
                    message: "must be at least 1".to_string(),
                });
            }
            v
        }
        None => {
            r.defaults.push("snapshot_every".to_string());
            50
        }
    };

    let seed = match r.take_raw("seed") {
        Some((raw, line)) => Resolver::parse("seed", &raw, line, "a nonnegative integer")?,
        None => {
            r.defaults.push("seed".to_string());
            0
        }
    };

    let out_dir = r.take_raw("out_dir").map(|(raw, _)| PathBuf::from(raw));

    // Everything read; leftovers would be a coding error since unknown keys
    // were rejected up front.
    debug_assert!(r.map.is_empty(), "unconsumed keys: {:?}", r.map);

    Ok(RunSpec {
        equation,
        n_points,
        period,
        dt,
        t_end,
        iteration,
        nyquist,
        ic,
        epsilon,
        beta,
        mu,
        nu,
        snapshot_every,
        out_dir,
        seed,
        defaults_applied: r.defaults,
    })
}

impl RunSpec {
    pub fn build_system(&self) -> Result<wnwe_core::EquationSystem, wnwe_core::equations::SystemError> {
        match self.equation {
            Equation::Kdv => wnwe_core::kdv_system(self.epsilon, self.beta),
            Equation::Nls => wnwe_core::nls_system(self.mu, self.nu),
            Equation::Sge => Ok(wnwe_core::sge_system()),
        }
    }

    pub fn build_grid(&self) -> Result<wnwe_core::SpectralGrid, wnwe_core::spectral::SpectralError> {
        wnwe_core::SpectralGrid::new(self.n_points, self.period)
    }

    pub fn build_step_config(&self) -> Result<wnwe_core::StepConfig, wnwe_core::stepper::StepError> {
        let config = match self.iteration {
            IterationSetting::Fixed(count) => wnwe_core::StepConfig::fixed(self.dt, count)?,
            IterationSetting::Tolerance {
                tol,
                max_iterations,
            } => wnwe_core::StepConfig::with_tolerance(self.dt, tol, max_iterations)?,
        };
        Ok(config.nyquist(self.nyquist))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_with_equation_flag_gives_reference_defaults() {
        let overrides = Overrides {
            equation: Some("kdv".to_string()),
            ..Default::default()
        };
        let spec = resolve_run_spec(Some(""), &overrides).unwrap();
        assert_eq!(spec.equation, Equation::Kdv);
        assert_eq!(spec.n_points, 512);
        assert_eq!(spec.period, 20.0);
        assert_eq!(spec.dt, 0.01);
        assert_eq!(spec.t_end, 5.0);
        assert_eq!(spec.epsilon, 0.05);
        assert_eq!(spec.iteration, IterationSetting::Fixed(3));
        assert!(matches!(spec.ic, IcSpec::KdvGaussian { .. }));
        assert!(spec.defaults_applied.iter().any(|k| k == "n"));

        let overrides = Overrides {
            equation: Some("nls".to_string()),
            ..Default::default()
        };
        let spec = resolve_run_spec(None, &overrides).unwrap();
        assert_eq!(spec.n_points, 1024);
        assert_eq!(spec.period, 2.0 * std::f64::consts::PI);
        assert_eq!(spec.nu, 2.0);
        assert!(matches!(spec.ic, IcSpec::NlsSech { b, nu } if b == 3.0 && nu == 2.0));
    }

    #[test]
    fn flag_wins_over_file() {
        let overrides = Overrides {
            equation: Some("nls".to_string()),
            dt: Some("0.01".to_string()),
            ..Default::default()
        };
        let spec = resolve_run_spec(Some("dt = 0.005\n"), &overrides).unwrap();
        assert_eq!(spec.dt, 0.01);
        assert!(!spec.defaults_applied.iter().any(|k| k == "dt"));
    }

    #[test]
    fn odd_n_names_key_and_constraint() {
        let overrides = Overrides {
            equation: Some("kdv".to_string()),
            ..Default::default()
        };
        let err = resolve_run_spec(Some("n = 513\n"), &overrides).unwrap_err();
        match &err {
            ConfigError::InvalidValue { key, line, message } => {
                assert_eq!(key, "n");
                assert_eq!(*line, Some(1));
                assert!(message.contains("even"), "message: {message}");
            }
            other => panic!("unexpected error {other:?}"),
        }
        // Non-power-of-two even sizes are also rejected for CLI use.
        let err = resolve_run_spec(Some("n = 48\n"), &overrides).unwrap_err();
        assert!(matches!(err, ConfigError::InvalidValue { .. }));
    }

    #[test]
    fn unknown_key_and_malformed_line() {
        let overrides = Overrides {
            equation: Some("kdv".to_string()),
            ..Default::default()
        };
        let err = resolve_run_spec(Some("frobnicate = 1\n"), &overrides).unwrap_err();
        assert_eq!(
            err,
            ConfigError::UnknownKey {
                key: "frobnicate".to_string(),
                line: Some(1)
            }
        );
        let err = resolve_run_spec(Some("just some text\n"), &overrides).unwrap_err();
        assert_eq!(err, ConfigError::MalformedLine { line: 1 });
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# reference setup\n\nequation = nls   # appendix values\nnu = 2\n";
        let spec = resolve_run_spec(Some(text), &Overrides::default()).unwrap();
        assert_eq!(spec.equation, Equation::Nls);
        assert_eq!(spec.nu, 2.0);
    }

    #[test]
    fn iteration_mode_conflicts_and_tolerance() {
        let overrides = Overrides {
            equation: Some("nls".to_string()),
            ..Default::default()
        };
        let err =
            resolve_run_spec(Some("iterations = 3\ntolerance = 1e-12\n"), &overrides).unwrap_err();
        assert!(matches!(err, ConfigError::ConflictingKeys { .. }));

        let spec = resolve_run_spec(Some("tolerance = 1e-10\n"), &overrides).unwrap();
        assert_eq!(
            spec.iteration,
            IterationSetting::Tolerance {
                tol: 1e-10,
                max_iterations: 25
            }
        );

        let err = resolve_run_spec(Some("max_iterations = 10\n"), &overrides).unwrap_err();
        assert!(matches!(err, ConfigError::InvalidValue { .. }));
    }

    #[test]
    fn missing_equation_is_reported() {
        let err = resolve_run_spec(Some("dt = 0.01\n"), &Overrides::default()).unwrap_err();
        assert_eq!(err, ConfigError::MissingKey { key: "equation" });
    }

    #[test]
    fn ic_component_mismatch_is_rejected() {
        let overrides = Overrides {
            equation: Some("sge".to_string()),
            ic: Some("nls_sech".to_string()),
            ..Default::default()
        };
        let err = resolve_run_spec(None, &overrides).unwrap_err();
        assert!(matches!(err, ConfigError::InvalidValue { .. }), "{err:?}");
    }

    #[test]
    fn kdv_gaussian_defaults_follow_period() {
        let overrides = Overrides {
            equation: Some("kdv".to_string()),
            ..Default::default()
        };
        let spec = resolve_run_spec(None, &overrides).unwrap();
        let a = 20.0 / (2.0 * std::f64::consts::PI);
        match spec.ic {
            IcSpec::KdvGaussian { c1, c2 } => {
                assert!((c1 - 1.2 / a).abs() < 1e-15);
                assert!((c2 - 1.0 / a).abs() < 1e-15);
            }
            other => panic!("unexpected ic {other:?}"),
        }
    }

    #[test]
    fn custom_ic_requires_file() {
        let overrides = Overrides {
            equation: Some("kdv".to_string()),
            ic: Some("custom".to_string()),
            ..Default::default()
        };
        let err = resolve_run_spec(None, &overrides).unwrap_err();
        assert_eq!(err, ConfigError::MissingKey { key: "ic_file" });

        let overrides = Overrides {
            equation: Some("kdv".to_string()),
            ic_file: Some("profile.txt".to_string()),
            ..Default::default()
        };
        let err = resolve_run_spec(None, &overrides).unwrap_err();
        assert!(matches!(err, ConfigError::InvalidValue { .. }));
    }

    #[test]
    fn nyquist_policy_parsing() {
        let overrides = Overrides {
            equation: Some("kdv".to_string()),
            nyquist: Some("zero".to_string()),
            ..Default::default()
        };
        let spec = resolve_run_spec(None, &overrides).unwrap();
        assert_eq!(spec.nyquist, NyquistPolicy::Zero);

        let overrides = Overrides {
            equation: Some("kdv".to_string()),
            nyquist: Some("off".to_string()),
            ..Default::default()
        };
        assert!(resolve_run_spec(None, &overrides).is_err());
    }
}
