//! The snapshot file format: a two-line `#` header followed by one CSV row
//! per grid point, written with shortest round-trip floats so read-back is
//! bit-exact.
//!
//! ```text
//! # wnwe-snapshot v1
//! # equation=<name> n=<N> period=<P> dt=<dt> t=<t> components=<n>
//! x,re_u1,im_u1[,re_u2,im_u2...]
//! <x>,<re>,<im>...
//! ```
//!
//! Header reals use scientific notation; every line ends with `\n` and there
//! is no trailing padding. Existing files are never overwritten.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use wnwe_core::spectral::{Field, SpectralGrid};

#[derive(Debug)]
pub enum SnapshotError {
    PathExists(PathBuf),
    Io(std::io::Error),
    NonFinite,
    Format { reason: String },
    ShapeMismatch { expected: usize, found: usize },
}

impl std::fmt::Display for SnapshotError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SnapshotError::PathExists(p) => {
                write!(f, "refusing to overwrite existing file {}", p.display())
            }
            SnapshotError::Io(e) => write!(f, "{e}"),
            SnapshotError::NonFinite => write!(f, "state contains non-finite samples"),
            SnapshotError::Format { reason } => write!(f, "malformed snapshot: {reason}"),
            SnapshotError::ShapeMismatch { expected, found } => {
                write!(f, "expected {expected} samples, found {found}")
            }
        }
    }
}

impl std::error::Error for SnapshotError {}

impl From<std::io::Error> for SnapshotError {
    fn from(e: std::io::Error) -> Self {
        SnapshotError::Io(e)
    }
}

/// Header metadata of one snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotMeta {
    pub equation: String,
    pub dt: f64,
    pub t: f64,
}

/// A parsed snapshot file.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub equation: String,
    pub n: usize,
    pub period: f64,
    pub dt: f64,
    pub t: f64,
    pub components: usize,
    pub x: Vec<f64>,
    pub state: Field,
}

/// Writes `state` at time `meta.t`. `derived` appends extra value columns
/// (named `re_<name>,im_<name>`) that readers ignore; the component count in
/// the header covers only the state itself.
pub fn write_snapshot(
    path: &Path,
    grid: &SpectralGrid,
    state: &Field,
    meta: &SnapshotMeta,
    derived: Option<(&str, &[Complex64])>,
) -> Result<(), SnapshotError> {
    if state.n_points() != grid.n_points() {
        return Err(SnapshotError::ShapeMismatch {
            expected: grid.n_points(),
            found: state.n_points(),
        });
    }
    if !state.is_finite() {
        return Err(SnapshotError::NonFinite);
    }
    if let Some((_, extra)) = derived {
        if extra.len() != grid.n_points() {
            return Err(SnapshotError::ShapeMismatch {
                expected: grid.n_points(),
                found: extra.len(),
            });
        }
    }

    let n = grid.n_points();
    let n_comp = state.n_components();
    let mut text = String::new();
    text.push_str("# wnwe-snapshot v1\n");
    text.push_str(&format!(
        "# equation={} n={} period={:e} dt={:e} t={:e} components={}\n",
        meta.equation,
        n,
        grid.period(),
        meta.dt,
        meta.t,
        n_comp
    ));
    text.push('x');
    for i in 1..=n_comp {
        text.push_str(&format!(",re_u{i},im_u{i}"));
    }
    if let Some((name, _)) = derived {
        text.push_str(&format!(",re_{name},im_{name}"));
    }
    text.push('\n');
    for j in 0..n {
        text.push_str(&format!("{}", grid.sample_points()[j]));
        for i in 0..n_comp {
            let z = state.component(i)[j];
            text.push_str(&format!(",{},{}", z.re, z.im));
        }
        if let Some((_, extra)) = derived {
            text.push_str(&format!(",{},{}", extra[j].re, extra[j].im));
        }
        text.push('\n');
    }

    let mut file = fs::OpenOptions::new()
        .write(true)
        .create_new(true)
        .open(path)
        .map_err(|e| {
            if e.kind() == std::io::ErrorKind::AlreadyExists {
                SnapshotError::PathExists(path.to_path_buf())
            } else {
                SnapshotError::Io(e)
            }
        })?;
    file.write_all(text.as_bytes())?;
    Ok(())
}

/// Reads a snapshot back; derived columns beyond the declared component
/// count are ignored.
pub fn read_snapshot(path: &Path) -> Result<Snapshot, SnapshotError> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();

    let magic = lines.next().unwrap_or_default();
    if magic != "# wnwe-snapshot v1" {
        return Err(SnapshotError::Format {
            reason: format!("bad magic line {magic:?}"),
        });
    }

    let header = lines.next().unwrap_or_default();
    let header = header.strip_prefix("# ").ok_or_else(|| SnapshotError::Format {
        reason: "missing metadata line".to_string(),
    })?;
    let mut equation = None;
    let mut n = None;
    let mut period = None;
    let mut dt = None;
    let mut t = None;
    let mut components = None;
    for token in header.split_whitespace() {
        let (key, value) = token.split_once('=').ok_or_else(|| SnapshotError::Format {
            reason: format!("bad metadata token {token:?}"),
        })?;
        let bad = |key: &str| SnapshotError::Format {
            reason: format!("cannot parse metadata value for {key}"),
        };
        match key {
            "equation" => equation = Some(value.to_string()),
            "n" => n = Some(value.parse::<usize>().map_err(|_| bad(key))?),
            "period" => period = Some(value.parse::<f64>().map_err(|_| bad(key))?),
            "dt" => dt = Some(value.parse::<f64>().map_err(|_| bad(key))?),
            "t" => t = Some(value.parse::<f64>().map_err(|_| bad(key))?),
            "components" => components = Some(value.parse::<usize>().map_err(|_| bad(key))?),
            other => {
                return Err(SnapshotError::Format {
                    reason: format!("unknown metadata key {other}"),
                })
            }
        }
    }
    let missing = |what: &str| SnapshotError::Format {
        reason: format!("metadata key {what} missing"),
    };
    let equation = equation.ok_or_else(|| missing("equation"))?;
    let n = n.ok_or_else(|| missing("n"))?;
    let period = period.ok_or_else(|| missing("period"))?;
    let dt = dt.ok_or_else(|| missing("dt"))?;
    let t = t.ok_or_else(|| missing("t"))?;
    let components = components.ok_or_else(|| missing("components"))?;

    let header_row = lines.next().unwrap_or_default();
    if !header_row.starts_with("x,") {
        return Err(SnapshotError::Format {
            reason: "missing column header".to_string(),
        });
    }

    let mut x = Vec::with_capacity(n);
    let mut comps = vec![Vec::with_capacity(n); components];
    for (row_idx, row) in lines.enumerate() {
        if row_idx >= n {
            return Err(SnapshotError::Format {
                reason: format!("more than {n} data rows"),
            });
        }
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() < 1 + 2 * components {
            return Err(SnapshotError::Format {
                reason: format!(
                    "row {} has {} columns, expected at least {}",
                    row_idx + 1,
                    fields.len(),
                    1 + 2 * components
                ),
            });
        }
        let parse = |s: &str| -> Result<f64, SnapshotError> {
            s.parse().map_err(|_| SnapshotError::Format {
                reason: format!("cannot parse number {s:?} in row {}", row_idx + 1),
            })
        };
        x.push(parse(fields[0])?);
        for (i, comp) in comps.iter_mut().enumerate() {
            let re = parse(fields[1 + 2 * i])?;
            let im = parse(fields[2 + 2 * i])?;
            comp.push(Complex64::new(re, im));
        }
    }
    if x.len() != n {
        return Err(SnapshotError::Format {
            reason: format!("expected {n} data rows, found {}", x.len()),
        });
    }

    let state = Field::new(comps).map_err(|e| SnapshotError::Format {
        reason: e.to_string(),
    })?;
    Ok(Snapshot {
        equation,
        n,
        period,
        dt,
        t,
        components,
        x,
        state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_field_line_count() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("snap.csv");
        let grid = SpectralGrid::new(4, 2.0).unwrap();
        let meta = SnapshotMeta {
            equation: "kdv".to_string(),
            dt: 0.01,
            t: 0.0,
        };
        write_snapshot(&path, &grid, &Field::zeros(1, 4), &meta, None).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 7); // 3 header + 4 data
        assert!(text.ends_with('\n'));
        assert!(!text.ends_with("\n\n"));
        assert!(text.starts_with("# wnwe-snapshot v1\n"));
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("snap.csv");
        let grid = SpectralGrid::new(16, 7.3).unwrap();
        let samples: Vec<Complex64> = (0..16)
            .map(|j| {
                let t = j as f64;
                c((t * 0.731).sin() * 1e-7, -(t * 1.17).cos() * 3.0e4)
            })
            .collect();
        let other: Vec<Complex64> = samples.iter().map(|z| z * c(0.0, -1.0)).collect();
        let state = Field::new(vec![samples, other]).unwrap();
        let meta = SnapshotMeta {
            equation: "sge".to_string(),
            dt: 1e-3,
            t: 0.123,
        };
        write_snapshot(&path, &grid, &state, &meta, None).unwrap();
        let back = read_snapshot(&path).unwrap();
        assert_eq!(back.components, 2);
        assert_eq!(back.equation, "sge");
        assert_eq!(back.dt.to_bits(), (1e-3f64).to_bits());
        for i in 0..2 {
            for (a, b) in back.state.component(i).iter().zip(state.component(i)) {
                assert_eq!(a.re.to_bits(), b.re.to_bits());
                assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
        for (a, b) in back.x.iter().zip(grid.sample_points()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn refuses_to_overwrite() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("snap.csv");
        let grid = SpectralGrid::new(4, 1.0).unwrap();
        let meta = SnapshotMeta {
            equation: "kdv".to_string(),
            dt: 0.01,
            t: 0.0,
        };
        write_snapshot(&path, &grid, &Field::zeros(1, 4), &meta, None).unwrap();
        let err = write_snapshot(&path, &grid, &Field::zeros(1, 4), &meta, None).unwrap_err();
        assert!(matches!(err, SnapshotError::PathExists(_)));
    }

    #[test]
    fn header_time_is_scientific_round_trip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("snap.csv");
        let grid = SpectralGrid::new(4, 20.0).unwrap();
        let meta = SnapshotMeta {
            equation: "kdv".to_string(),
            dt: 0.01,
            t: 500.0 * 0.01,
        };
        write_snapshot(&path, &grid, &Field::zeros(1, 4), &meta, None).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let header = text.lines().nth(1).unwrap();
        assert!(header.contains("t=5e0"), "header: {header}");
        assert!(header.contains("period=2e1"), "header: {header}");
        assert!(header.contains("dt=1e-2"), "header: {header}");
    }

    #[test]
    fn derived_columns_are_written_and_ignored_on_read() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("snap.csv");
        let grid = SpectralGrid::new(4, 2.0).unwrap();
        let u1 = vec![c(1.0, 0.0); 4];
        let u2 = vec![c(0.5, 0.0); 4];
        let reconstructed: Vec<Complex64> = u1
            .iter()
            .zip(&u2)
            .map(|(a, b)| 0.5 * (a + b))
            .collect();
        let state = Field::new(vec![u1, u2]).unwrap();
        let meta = SnapshotMeta {
            equation: "sge".to_string(),
            dt: 0.01,
            t: 0.0,
        };
        write_snapshot(&path, &grid, &state, &meta, Some(("u", &reconstructed))).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.lines().nth(2).unwrap().ends_with("re_u,im_u"));
        let back = read_snapshot(&path).unwrap();
        assert_eq!(back.components, 2);
        assert_eq!(back.state, state);
    }

    #[test]
    fn rejects_non_finite_state() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("snap.csv");
        let grid = SpectralGrid::new(4, 1.0).unwrap();
        let state = Field::scalar(vec![c(f64::NAN, 0.0); 4]);
        let meta = SnapshotMeta {
            equation: "kdv".to_string(),
            dt: 0.01,
            t: 0.0,
        };
        assert!(matches!(
            write_snapshot(&path, &grid, &state, &meta, None),
            Err(SnapshotError::NonFinite)
        ));
    }
}
