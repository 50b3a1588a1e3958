//! Claims development triangles, premium vectors and their CSV formats.
//!
//! A [`ClaimsTriangle`] holds cumulative claims `C[i][j]` for accident years
//! `i = 0..I-1` (rows) and development periods `j = 0..J` (columns), observed
//! on the upper triangle only: row `i` has the `I - i` cells `j = 0..=J-i`.
//! The shape is restricted to proper triangles, `I = J + 1`; trapezoids are
//! rejected.
//!
//! ## Triangle CSV format
//!
//! ```text
//! accident_year,dev_0,dev_1,...,dev_J
//! 1,5946975,9668212,...,11148124
//! 2,6346756,9593162,...,
//! ...
//! ```
//!
//! One row per accident year in increasing order; unobserved cells are left
//! empty; decimal point `.`; no thousands separators. The premium CSV format
//! has header `accident_year,premium` and one row per year.

use crate::error::{Error, Result};

/// Cumulative claims run-off triangle.
///
/// Every observed cell is strictly positive; negative *increments* are
/// permitted, only cumulative positivity is enforced.
#[derive(Debug, Clone, PartialEq)]
pub struct ClaimsTriangle {
    rows: Vec<Vec<f64>>,
}

impl ClaimsTriangle {
    /// Build a triangle from per-year rows. Row `i` must have exactly
    /// `I - i` cells, where `I` is the number of rows.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let years = rows.len();
        if years < 2 {
            return Err(Error::Shape(format!(
                "triangle needs at least 2 accident years, got {years} \
                 (a single year has no development factors)"
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            let expected = years - i;
            if row.len() != expected {
                return Err(Error::Shape(format!(
                    "accident year {} has {} cells, expected {} (upper triangle with I = J + 1)",
                    i + 1,
                    row.len(),
                    expected
                )));
            }
            for (j, &value) in row.iter().enumerate() {
                if !value.is_finite() {
                    return Err(Error::Validation(format!(
                        "cell (accident year {}, dev {}) is not finite",
                        i + 1,
                        j
                    )));
                }
                if value <= 0.0 {
                    return Err(Error::Validation(format!(
                        "cell (accident year {}, dev {}) = {} must be strictly positive",
                        i + 1,
                        j,
                        value
                    )));
                }
            }
        }
        Ok(Self { rows })
    }

    /// Number of accident years `I`.
    pub fn accident_years(&self) -> usize {
        self.rows.len()
    }

    /// Maximal development period index `J = I - 1`.
    pub fn dev_periods(&self) -> usize {
        self.rows.len() - 1
    }

    /// Development period of the latest observation for `year` (0-based):
    /// `J - year`.
    pub fn diagonal_dev(&self, year: usize) -> usize {
        self.rows.len() - 1 - year
    }

    /// Observed cell, or `None` outside the upper triangle.
    pub fn get(&self, year: usize, dev: usize) -> Option<f64> {
        self.rows.get(year).and_then(|row| row.get(dev).copied())
    }

    /// Observed cells of one accident year.
    pub fn row(&self, year: usize) -> &[f64] {
        &self.rows[year]
    }

    /// The latest observed value per accident year, `C[i][J - i]`.
    pub fn latest_diagonal(&self) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| *row.last().expect("rows are non-empty"))
            .collect()
    }

    /// Decompose into incremental claims; the first column is kept as-is.
    /// Increments are chosen so that cumulation reproduces the source cells
    /// bit-exactly (see [`exact_increment`] for the one caveat).
    pub fn to_incremental(&self) -> IncrementalTriangle {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut out = Vec::with_capacity(row.len());
                out.push(row[0]);
                for j in 1..row.len() {
                    out.push(exact_increment(row[j - 1], row[j]));
                }
                out
            })
            .collect();
        IncrementalTriangle { rows }
    }

    /// Parse the triangle CSV format described in the module docs.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::Shape("empty input, expected a header line".into()))?;
        let fields: Vec<&str> = header.split(',').map(str::trim).collect();
        if fields.first() != Some(&"accident_year") {
            return Err(Error::Parse {
                row: 1,
                col: 1,
                msg: format!("expected header field `accident_year`, got `{}`", fields[0]),
            });
        }
        let dev_cols = fields.len() - 1;
        if dev_cols == 0 {
            return Err(Error::Shape(
                "header declares no development columns".into(),
            ));
        }
        for (j, field) in fields[1..].iter().enumerate() {
            let expected = format!("dev_{j}");
            if *field != expected {
                return Err(Error::Parse {
                    row: 1,
                    col: j + 2,
                    msg: format!("expected header field `{expected}`, got `{field}`"),
                });
            }
        }

        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut prev_label: Option<i64> = None;
        for (line_idx, line) in lines {
            let row_no = line_idx + 1; // 1-based, header included
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() > dev_cols + 1 {
                return Err(Error::Shape(format!(
                    "row {} has {} fields, expected at most {}",
                    row_no,
                    fields.len(),
                    dev_cols + 1
                )));
            }
            let label: i64 = fields[0].parse().map_err(|_| Error::Parse {
                row: row_no,
                col: 1,
                msg: format!("accident year label `{}` is not an integer", fields[0]),
            })?;
            if let Some(prev) = prev_label {
                if label <= prev {
                    return Err(Error::Validation(format!(
                        "accident year labels must be strictly increasing, got {label} after {prev}"
                    )));
                }
            }
            prev_label = Some(label);

            let mut cells = Vec::new();
            let mut seen_empty = false;
            for (j, field) in fields[1..].iter().enumerate() {
                if field.is_empty() {
                    seen_empty = true;
                    continue;
                }
                if seen_empty {
                    return Err(Error::Shape(format!(
                        "row {}: observed cell in column {} after an empty cell; \
                         the observed region must be a contiguous prefix",
                        row_no,
                        j + 2
                    )));
                }
                let value: f64 = field.parse().map_err(|_| Error::Parse {
                    row: row_no,
                    col: j + 2,
                    msg: format!("cell `{field}` is not a number"),
                })?;
                cells.push(value);
            }
            rows.push(cells);
        }

        let years = rows.len();
        if years != dev_cols {
            return Err(Error::Shape(format!(
                "{years} accident years with {dev_cols} development columns; \
                 a triangle requires I = J + 1 (one row per column)"
            )));
        }
        Self::from_rows(rows)
    }

    /// Serialize to the triangle CSV format; `parse_csv` round-trips exactly.
    pub fn to_csv(&self) -> String {
        let years = self.accident_years();
        let mut out = String::from("accident_year");
        for j in 0..years {
            out.push_str(&format!(",dev_{j}"));
        }
        out.push('\n');
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str(&format!("{}", i + 1));
            for j in 0..years {
                out.push(',');
                if let Some(v) = row.get(j) {
                    out.push_str(&format!("{v}"));
                }
            }
            out.push('\n');
        }
        out
    }
}

/// An increment `y` with `prev + y == next` exactly in floating point,
/// when such a `y` exists.
///
/// By Sterbenz's lemma the naive difference is already exact whenever the
/// cells stay within a factor of two of each other, and monetary
/// (integer-valued) cells always subtract exactly; a few ulp nudges cover
/// the remaining large jumps. Adversarial float inputs can have no exact
/// increment at all (permanent ties under round-half-even); the naive
/// difference is kept then, one ulp off on cumulation.
fn exact_increment(prev: f64, next: f64) -> f64 {
    let naive = next - prev;
    let mut y = naive;
    for _ in 0..8 {
        let sum = prev + y;
        if sum == next {
            return y;
        }
        y = if sum < next {
            y.next_up()
        } else {
            y.next_down()
        };
    }
    naive
}

/// Incremental claims on the same upper triangle as the source
/// [`ClaimsTriangle`]. Increments may be negative.
#[derive(Debug, Clone, PartialEq)]
pub struct IncrementalTriangle {
    rows: Vec<Vec<f64>>,
}

impl IncrementalTriangle {
    pub fn accident_years(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, year: usize) -> &[f64] {
        &self.rows[year]
    }

    /// Cumulate back to a claims triangle; exact inverse of
    /// [`ClaimsTriangle::to_incremental`].
    pub fn cumulate(&self) -> Result<ClaimsTriangle> {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut out = Vec::with_capacity(row.len());
                let mut acc = 0.0;
                for &v in row {
                    acc += v;
                    out.push(acc);
                }
                out
            })
            .collect();
        ClaimsTriangle::from_rows(rows)
    }
}

/// Per-accident-year premium (exposure) vector; entries strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct PremiumVector {
    premiums: Vec<f64>,
}

impl PremiumVector {
    pub fn new(premiums: Vec<f64>) -> Result<Self> {
        if premiums.is_empty() {
            return Err(Error::Shape("premium vector must be non-empty".into()));
        }
        for (i, &p) in premiums.iter().enumerate() {
            if !p.is_finite() || p <= 0.0 {
                return Err(Error::Validation(format!(
                    "premium for accident year {} = {} must be strictly positive",
                    i + 1,
                    p
                )));
            }
        }
        Ok(Self { premiums })
    }

    pub fn len(&self) -> usize {
        self.premiums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.premiums.is_empty()
    }

    pub fn get(&self, year: usize) -> f64 {
        self.premiums[year]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.premiums
    }

    /// Parse the premium CSV format (`accident_year,premium`).
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::Shape("empty input, expected a header line".into()))?;
        let fields: Vec<&str> = header.split(',').map(str::trim).collect();
        if fields != ["accident_year", "premium"] {
            return Err(Error::Parse {
                row: 1,
                col: 1,
                msg: format!("expected header `accident_year,premium`, got `{header}`"),
            });
        }
        let mut premiums = Vec::new();
        for (line_idx, line) in lines {
            let row_no = line_idx + 1;
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 2 {
                return Err(Error::Shape(format!(
                    "row {}: expected 2 fields, got {}",
                    row_no,
                    fields.len()
                )));
            }
            let value: f64 = fields[1].parse().map_err(|_| Error::Parse {
                row: row_no,
                col: 2,
                msg: format!("premium `{}` is not a number", fields[1]),
            })?;
            premiums.push(value);
        }
        Self::new(premiums)
    }

    /// Serialize to the premium CSV format; `parse_csv` round-trips exactly.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("accident_year,premium\n");
        for (i, p) in self.premiums.iter().enumerate() {
            out.push_str(&format!("{},{p}\n", i + 1));
        }
        out
    }
}
