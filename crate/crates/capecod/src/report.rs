//! λ-sweep report: reserves and uncertainty across the decay-factor grid,
//! with deterministic CSV and JSON emission.
//!
//! ## CSV layout (frozen)
//!
//! Four blocks separated by one blank line, numbers in scientific notation
//! with 15 significant digits:
//!
//! ```text
//! lambda,reserves_total,process_error,param_error,rmsep,cova,reserve_1,...,reserve_I
//! ...                              # one row per grid λ
//!
//! kappa_1,...,kappa_I              # individual claims ratios (λ-free)
//! ...                              # single row
//!
//! lambda,kappa_gcc_1,...,kappa_gcc_I
//! ...                              # blended ratios per grid λ
//!
//! lambda,q_0,...,q_{J-1}
//! ...                              # factor sensitivities per grid λ
//! ```
//!
//! `process_error`, `param_error` and `rmsep` are square roots (same units
//! as the reserves), so `rmsep² = process_error² + param_error²`. An
//! undefined coefficient of variation (non-positive reserves) is an empty
//! field in CSV and `null` in JSON.

use serde::Serialize;

use crate::chain_ladder::ClFit;
use crate::error::{Error, Result};
use crate::gcc::{
    gcc_claims_ratios, gcc_predict, gcc_reserves, individual_claims_ratios, GccInput,
};
use crate::triangle::{ClaimsTriangle, PremiumVector};
use crate::uncertainty::{gcc_msep, q_sensitivities};

pub const SCHEMA_VERSION: u32 = 1;

/// Provenance and display information carried into the report.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ReportMetadata {
    pub triangle_file: String,
    pub triangle_sha256: String,
    pub premiums_file: String,
    pub premiums_sha256: String,
    pub display_scale: f64,
}

/// Reserves and uncertainty at one grid `λ`; error figures are square
/// roots, in the same units as the reserves.
#[derive(Debug, Clone, Serialize)]
pub struct LambdaRecord {
    pub lambda: f64,
    pub reserves_total: f64,
    pub reserves_by_year: Vec<f64>,
    pub process_error: f64,
    pub param_error: f64,
    pub rmsep: f64,
    pub cova: Option<f64>,
}

/// Full sweep document: per-λ records plus the claims-ratio and
/// sensitivity series behind the usual diagnostic plots.
#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub metadata: ReportMetadata,
    pub lambda_grid: Vec<f64>,
    /// Individual claims ratios `κ_i` (λ-independent).
    pub kappa_individual: Vec<f64>,
    pub records: Vec<LambdaRecord>,
    /// Blended ratios `κ_i(λ)` per grid λ.
    pub kappa_gcc: Vec<Vec<f64>>,
    /// Sensitivities `q_t(λ)` per grid λ.
    pub q: Vec<Vec<f64>>,
}

impl ReportDocument {
    /// Evaluate the sweep over a strictly increasing λ grid.
    pub fn build(
        tri: &ClaimsTriangle,
        premiums: &PremiumVector,
        lambdas: &[f64],
        metadata: ReportMetadata,
    ) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::Domain("lambda grid must be non-empty".into()));
        }
        if lambdas.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain(
                "lambda grid must be strictly increasing".into(),
            ));
        }
        let fit = ClFit::fit(tri)?;
        let kappa_individual = individual_claims_ratios(tri, premiums, &fit.pattern);

        let mut records = Vec::with_capacity(lambdas.len());
        let mut kappa_gcc = Vec::with_capacity(lambdas.len());
        let mut q = Vec::with_capacity(lambdas.len());
        for &lambda in lambdas {
            let input = GccInput::new(tri, premiums, &fit.pattern, lambda)?;
            let result = gcc_predict(&input);
            let (reserves_by_year, reserves_total) = gcc_reserves(&result, tri);
            let msep = gcc_msep(tri, premiums, &fit, lambda)?;
            records.push(LambdaRecord {
                lambda,
                reserves_total,
                reserves_by_year,
                process_error: msep.process_var.sqrt(),
                param_error: msep.param_error.sqrt(),
                rmsep: msep.rmsep,
                cova: msep.cova,
            });
            kappa_gcc.push(gcc_claims_ratios(&input));
            q.push(q_sensitivities(tri, premiums, &fit.pattern, lambda)?.q);
        }
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            metadata,
            lambda_grid: lambdas.to_vec(),
            kappa_individual,
            records,
            kappa_gcc,
            q,
        })
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report document serializes");
        out.push('\n');
        out
    }

    pub fn to_csv(&self) -> String {
        let years = self.kappa_individual.len();
        let devs = years - 1;
        let mut out = String::new();

        out.push_str("lambda,reserves_total,process_error,param_error,rmsep,cova");
        for i in 1..=years {
            out.push_str(&format!(",reserve_{i}"));
        }
        out.push('\n');
        for record in &self.records {
            out.push_str(&fmt(record.lambda));
            for value in [
                record.reserves_total,
                record.process_error,
                record.param_error,
                record.rmsep,
            ] {
                out.push(',');
                out.push_str(&fmt(value));
            }
            out.push(',');
            if let Some(cova) = record.cova {
                out.push_str(&fmt(cova));
            }
            for value in &record.reserves_by_year {
                out.push(',');
                out.push_str(&fmt(*value));
            }
            out.push('\n');
        }
        out.push('\n');

        out.push_str(&series_header("kappa", 1, years));
        out.push('\n');
        out.push_str(&join(&self.kappa_individual));
        out.push('\n');
        out.push('\n');

        out.push_str("lambda,");
        out.push_str(&series_header("kappa_gcc", 1, years));
        out.push('\n');
        for (lambda, row) in self.lambda_grid.iter().zip(&self.kappa_gcc) {
            out.push_str(&fmt(*lambda));
            out.push(',');
            out.push_str(&join(row));
            out.push('\n');
        }
        out.push('\n');

        out.push_str("lambda,");
        out.push_str(&series_header("q", 0, devs - 1));
        out.push('\n');
        for (lambda, row) in self.lambda_grid.iter().zip(&self.q) {
            out.push_str(&fmt(*lambda));
            out.push(',');
            out.push_str(&join(row));
            out.push('\n');
        }
        out
    }

    /// Human-readable summary table at the given display scale: reserves and
    /// error figures as scaled integers, coefficient of variation as a
    /// two-decimal percentage.
    pub fn to_text(&self, scale: f64) -> String {
        let mut out = format!(
            "{:>7}  {:>10}  {:>8}  {:>8}  {:>8}  {:>7}\n",
            "lambda", "reserves", "process", "param", "rmsep", "cova"
        );
        for r in &self.records {
            let cova = match r.cova {
                Some(c) => format!("{:.2}%", c * 100.0),
                None => "-".to_string(),
            };
            out.push_str(&format!(
                "{:>7}  {:>10}  {:>8}  {:>8}  {:>8}  {:>7}\n",
                trim_lambda(r.lambda),
                scaled(r.reserves_total, scale),
                scaled(r.process_error, scale),
                scaled(r.param_error, scale),
                scaled(r.rmsep, scale),
                cova
            ));
        }
        out
    }

    /// The record with the smallest RMSEP (first one on ties).
    pub fn min_rmsep_record(&self) -> &LambdaRecord {
        self.records
            .iter()
            .min_by(|a, b| a.rmsep.total_cmp(&b.rmsep))
            .expect("at least one record")
    }
}

/// Uniform λ grid from 0 to 1 inclusive; the step must divide the unit
/// interval into at least one piece (2 grid points).
pub fn lambda_grid(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::Domain(format!(
            "grid step {step} must lie in (0, 1]"
        )));
    }
    let pieces = 1.0 / step;
    let n = pieces.round();
    if (pieces - n).abs() > 1e-9 {
        return Err(Error::Domain(format!(
            "grid step {step} must divide [0, 1] evenly"
        )));
    }
    let n = n as usize;
    Ok((0..=n).map(|k| k as f64 / n as f64).collect())
}

/// 15 significant digits, scientific notation; enough to round-trip f64 for
/// practical purposes while keeping output byte-stable.
pub(crate) fn fmt(value: f64) -> String {
    format!("{value:.14e}")
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| fmt(*v)).collect::<Vec<_>>().join(",")
}

fn series_header(prefix: &str, from: usize, to: usize) -> String {
    (from..=to)
        .map(|i| format!("{prefix}_{i}"))
        .collect::<Vec<_>>()
        .join(",")
}

pub(crate) fn scaled(value: f64, scale: f64) -> String {
    format!("{}", (value / scale).round())
}

fn trim_lambda(lambda: f64) -> String {
    format!("{lambda}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testdata;

    #[test]
    fn grid_construction() {
        assert_eq!(lambda_grid(1.0).unwrap(), vec![0.0, 1.0]);
        assert_eq!(lambda_grid(0.25).unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(lambda_grid(0.05).unwrap().len(), 21);
        assert!(matches!(lambda_grid(0.0), Err(Error::Domain(_))));
        assert!(matches!(lambda_grid(0.3), Err(Error::Domain(_))));
        assert!(matches!(lambda_grid(1.5), Err(Error::Domain(_))));
    }

    #[test]
    fn document_is_consistent_and_deterministic() {
        let tri = testdata::wm2008_triangle();
        let premiums = testdata::wm2008_premiums();
        let grid = lambda_grid(0.25).unwrap();
        let doc = ReportDocument::build(&tri, &premiums, &grid, ReportMetadata::default()).unwrap();
        assert_eq!(doc.records.len(), 5);
        for r in &doc.records {
            let lhs = r.rmsep * r.rmsep;
            let rhs = r.process_error * r.process_error + r.param_error * r.param_error;
            assert!((lhs - rhs).abs() / rhs < 1e-9);
            assert!(
                (r.reserves_by_year.iter().sum::<f64>() - r.reserves_total).abs()
                    / r.reserves_total.abs()
                    < 1e-12
            );
        }
        let again =
            ReportDocument::build(&tri, &premiums, &grid, ReportMetadata::default()).unwrap();
        assert_eq!(doc.to_csv(), again.to_csv());
        assert_eq!(doc.to_json(), again.to_json());
    }

    #[test]
    fn csv_has_the_frozen_block_layout() {
        let tri = testdata::wm2008_triangle();
        let premiums = testdata::wm2008_premiums();
        let doc =
            ReportDocument::build(&tri, &premiums, &[0.0, 0.5, 1.0], ReportMetadata::default())
                .unwrap();
        let csv = doc.to_csv();
        let blocks: Vec<&str> = csv.split("\n\n").collect();
        assert_eq!(blocks.len(), 4);
        assert!(blocks[0]
            .starts_with("lambda,reserves_total,process_error,param_error,rmsep,cova,reserve_1"));
        assert!(blocks[1].starts_with("kappa_1,"));
        assert!(blocks[2].starts_with("lambda,kappa_gcc_1,"));
        assert!(blocks[3].starts_with("lambda,q_0,"));
        // 3 grid rows per λ-indexed block.
        assert_eq!(blocks[0].lines().count(), 4);
        assert_eq!(blocks[2].lines().count(), 4);
    }

    #[test]
    fn rejects_unsorted_grids() {
        let tri = testdata::wm2008_triangle();
        let premiums = testdata::wm2008_premiums();
        assert!(matches!(
            ReportDocument::build(&tri, &premiums, &[0.5, 0.25], ReportMetadata::default()),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            ReportDocument::build(&tri, &premiums, &[], ReportMetadata::default()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn minimum_rmsep_on_the_fine_grid_sits_at_055() {
        let tri = testdata::wm2008_triangle();
        let premiums = testdata::wm2008_premiums();
        let grid = lambda_grid(0.05).unwrap();
        let doc = ReportDocument::build(&tri, &premiums, &grid, ReportMetadata::default()).unwrap();
        assert_eq!(doc.min_rmsep_record().lambda, 0.55);
    }
}
