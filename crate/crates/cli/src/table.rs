//! Loads tabulated initial conditions from text files: one row per point,
//! `x` followed by either `re` or `re im` per component, separated by
//! whitespace or commas. `#` starts a comment. Rows are sorted by `x` and
//! interpolated linearly onto the grid.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use wnwe_core::equations::{InitialCondition, SystemError, TableRow};

#[derive(Debug)]
pub enum TableError {
    Io(std::io::Error),
    Parse { line: usize, message: String },
    ColumnCount {
        line: usize,
        found: usize,
        expected_re: usize,
        expected_complex: usize,
    },
    Invalid(SystemError),
}

impl std::fmt::Display for TableError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TableError::Io(e) => write!(f, "{e}"),
            TableError::Parse { line, message } => write!(f, "line {line}: {message}"),
            TableError::ColumnCount {
                line,
                found,
                expected_re,
                expected_complex,
            } => write!(
                f,
                "line {line}: {found} columns; expected {expected_re} (x + re per component) \
                 or {expected_complex} (x + re,im per component)"
            ),
            TableError::Invalid(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for TableError {}

impl From<std::io::Error> for TableError {
    fn from(e: std::io::Error) -> Self {
        TableError::Io(e)
    }
}

pub fn load_initial_condition(
    path: &Path,
    n_components: usize,
) -> Result<InitialCondition, TableError> {
    let text = fs::read_to_string(path)?;
    parse_table_text(&text, n_components)
}

pub fn parse_table_text(
    text: &str,
    n_components: usize,
) -> Result<InitialCondition, TableError> {
    let expected_re = 1 + n_components;
    let expected_complex = 1 + 2 * n_components;
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = raw.split('#').next().unwrap_or("").trim();
        if stripped.is_empty() {
            continue;
        }
        let numbers: Result<Vec<f64>, _> = stripped
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(str::parse::<f64>)
            .collect();
        let numbers = numbers.map_err(|e| TableError::Parse {
            line,
            message: e.to_string(),
        })?;
        let values = if numbers.len() == expected_re {
            numbers[1..]
                .iter()
                .map(|&re| Complex64::new(re, 0.0))
                .collect()
        } else if numbers.len() == expected_complex {
            numbers[1..]
                .chunks(2)
                .map(|pair| Complex64::new(pair[0], pair[1]))
                .collect()
        } else {
            return Err(TableError::ColumnCount {
                line,
                found: numbers.len(),
                expected_re,
                expected_complex,
            });
        };
        rows.push(TableRow {
            x: numbers[0],
            values,
        });
    }
    rows.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap_or(std::cmp::Ordering::Equal));
    InitialCondition::from_table(rows).map_err(TableError::Invalid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_column_real_table() {
        let ic = parse_table_text("# x u\n0 1\n1 3\n2 5\n", 1).unwrap();
        let mut out = [Complex64::new(0.0, 0.0)];
        ic.evaluate(0.5, &mut out);
        assert_eq!(out[0], Complex64::new(2.0, 0.0));
        ic.evaluate(1.5, &mut out);
        assert_eq!(out[0], Complex64::new(4.0, 0.0));
    }

    #[test]
    fn three_column_complex_table_with_commas() {
        let ic = parse_table_text("0, 1, -1\n2, 3, 1\n", 1).unwrap();
        let mut out = [Complex64::new(0.0, 0.0)];
        ic.evaluate(1.0, &mut out);
        assert_eq!(out[0], Complex64::new(2.0, 0.0));
    }

    #[test]
    fn unsorted_rows_are_sorted_before_interpolation() {
        let ic = parse_table_text("2 5\n0 1\n1 3\n", 1).unwrap();
        let mut out = [Complex64::new(0.0, 0.0)];
        ic.evaluate(0.5, &mut out);
        assert_eq!(out[0], Complex64::new(2.0, 0.0));
    }

    #[test]
    fn wrong_column_count_is_reported_with_line() {
        let err = parse_table_text("0 1\n1 2 3 4\n", 1).unwrap_err();
        match err {
            TableError::ColumnCount { line, found, .. } => {
                assert_eq!(line, 2);
                assert_eq!(found, 4);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn two_component_complex_table() {
        let ic = parse_table_text("0 1 0 2 0\n1 2 0 4 0\n", 2).unwrap();
        let mut out = [Complex64::new(0.0, 0.0); 2];
        ic.evaluate(0.5, &mut out);
        assert_eq!(out[0], Complex64::new(1.5, 0.0));
        assert_eq!(out[1], Complex64::new(3.0, 0.0));
    }

    #[test]
    fn duplicate_abscissa_is_rejected() {
        assert!(matches!(
            parse_table_text("0 1\n0 2\n1 3\n", 1),
            Err(TableError::Invalid(_))
        ));
    }
}
