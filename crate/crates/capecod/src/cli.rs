//! Implementations behind the `capecod` command-line tool.
//!
//! Each command returns its full output as a string; the binary decides
//! whether it goes to standard output or to `--out`. All diagnostics are
//! the caller's job (the binary prints errors to the error stream and maps
//! them to exit codes via [`crate::Error::exit_code`]).

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::chain_ladder::ClFit;
use crate::error::Result;
use crate::gcc::{cc_claims_ratio, gcc_predict, gcc_reserves, individual_claims_ratios, GccInput};
use crate::report::{self, lambda_grid, ReportDocument, ReportMetadata, SCHEMA_VERSION};
use crate::simulator::{run_study, SimConfig, SimStudy};
use crate::triangle::{ClaimsTriangle, PremiumVector};

/// Output format shared by the commands; `Text` is the human table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().fold(String::with_capacity(64), |mut acc, b| {
        let _ = write!(acc, "{b:02x}");
        acc
    })
}

fn load_triangle(path: &Path) -> Result<(ClaimsTriangle, String)> {
    let text = std::fs::read_to_string(path)?;
    Ok((
        ClaimsTriangle::parse_csv(&text)?,
        sha256_hex(text.as_bytes()),
    ))
}

fn load_premiums(path: &Path) -> Result<(PremiumVector, String)> {
    let text = std::fs::read_to_string(path)?;
    Ok((
        PremiumVector::parse_csv(&text)?,
        sha256_hex(text.as_bytes()),
    ))
}

/// Chain-ladder fit plus claims-ratio summary.
#[derive(Debug, Clone, Serialize)]
pub struct FitDocument {
    pub schema_version: u32,
    pub triangle_file: String,
    pub triangle_sha256: String,
    pub premiums_file: String,
    pub premiums_sha256: String,
    pub factors: Vec<f64>,
    pub sigma2: Vec<f64>,
    pub pattern: Vec<f64>,
    pub kappa_individual: Vec<f64>,
    pub kappa_cc: f64,
}

impl FitDocument {
    fn to_text(&self) -> String {
        let devs = self.factors.len();
        let mut out = format!("chain-ladder fit: {} accident years\n\n", devs + 1);
        out.push_str("j,factor,sigma2,beta\n");
        for j in 0..devs {
            let _ = writeln!(
                out,
                "{j},{},{},{}",
                self.factors[j], self.sigma2[j], self.pattern[j]
            );
        }
        let _ = writeln!(out, "{devs},,,{}", self.pattern[devs]);
        out.push_str("\nyear,kappa\n");
        for (i, kappa) in self.kappa_individual.iter().enumerate() {
            let _ = writeln!(out, "{},{kappa}", i + 1);
        }
        let _ = writeln!(out, "\nkappa_cc,{}", self.kappa_cc);
        out
    }
}

/// `fit`: development factors, variance parameters, pattern, individual
/// claims ratios and the pooled Cape Cod ratio.
pub fn cmd_fit(triangle: &Path, premiums: &Path, format: OutputFormat) -> Result<String> {
    let (tri, triangle_sha256) = load_triangle(triangle)?;
    let (pi, premiums_sha256) = load_premiums(premiums)?;
    let fit = ClFit::fit(&tri)?;
    let doc = FitDocument {
        schema_version: SCHEMA_VERSION,
        triangle_file: triangle.display().to_string(),
        triangle_sha256,
        premiums_file: premiums.display().to_string(),
        premiums_sha256,
        kappa_individual: individual_claims_ratios(&tri, &pi, &fit.pattern),
        kappa_cc: cc_claims_ratio(&tri, &pi, &fit.pattern),
        factors: fit.factors,
        sigma2: fit.sigma2,
        pattern: fit.pattern,
    };
    Ok(match format {
        OutputFormat::Text => doc.to_text(),
        OutputFormat::Csv => doc.to_text(), // the text form is already CSV blocks
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&doc).expect("fit document serializes");
            s.push('\n');
            s
        }
    })
}

/// `reserve`: per-year and total GCC reserves at one `λ`, raw and at the
/// display scale.
pub fn cmd_reserve(triangle: &Path, premiums: &Path, lambda: f64, scale: f64) -> Result<String> {
    let (tri, _) = load_triangle(triangle)?;
    let (pi, _) = load_premiums(premiums)?;
    let fit = ClFit::fit(&tri)?;
    let input = GccInput::new(&tri, &pi, &fit.pattern, lambda)?;
    let result = gcc_predict(&input);
    let (per_year, total) = gcc_reserves(&result, &tri);

    let mut out =
        format!("generalized Cape Cod reserves, lambda = {lambda}, display scale = {scale}\n\n");
    out.push_str("year,reserve,reserve_scaled\n");
    for (i, reserve) in per_year.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{reserve},{}",
            i + 1,
            report::scaled(*reserve, scale)
        );
    }
    let _ = writeln!(out, "total,{total},{}", report::scaled(total, scale));
    Ok(out)
}

/// `sweep`: reserves, error split, RMSEP and CoVa over the uniform λ grid,
/// plus the claims-ratio and sensitivity series.
pub fn cmd_sweep(
    triangle: &Path,
    premiums: &Path,
    grid_step: f64,
    scale: f64,
    format: OutputFormat,
) -> Result<String> {
    let (tri, triangle_sha256) = load_triangle(triangle)?;
    let (pi, premiums_sha256) = load_premiums(premiums)?;
    let grid = lambda_grid(grid_step)?;
    let metadata = ReportMetadata {
        triangle_file: triangle.display().to_string(),
        triangle_sha256,
        premiums_file: premiums.display().to_string(),
        premiums_sha256,
        display_scale: scale,
    };
    let doc = ReportDocument::build(&tri, &pi, &grid, metadata)?;
    Ok(match format {
        OutputFormat::Text => doc.to_text(scale),
        OutputFormat::Csv => doc.to_csv(),
        OutputFormat::Json => doc.to_json(),
    })
}

#[derive(Debug, Clone, Serialize)]
struct SimulateDocument {
    schema_version: u32,
    config_file: String,
    config_sha256: String,
    seed: u64,
    replications: usize,
    redraws: usize,
    calibration: Vec<CalibrationRecord>,
}

#[derive(Debug, Clone, Serialize)]
struct CalibrationRecord {
    lambda: f64,
    empirical_rmse: f64,
    mean_estimated_rmsep: f64,
    mean_reserves: f64,
}

fn study_csv(study: &SimStudy) -> String {
    let mut out = String::from(
        "lambda,empirical_rmse,mean_estimated_rmsep,mean_reserves,replications,redraws\n",
    );
    for c in &study.calibration {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            report::fmt(c.lambda),
            report::fmt(c.empirical_rmse),
            report::fmt(c.mean_estimated_rmsep),
            report::fmt(c.mean_reserves),
            study.replications,
            study.redraws
        );
    }
    out
}

fn study_text(study: &SimStudy) -> String {
    let mut out = format!(
        "simulation study: {} replications, {} redraws\n\n{:>7}  {:>14}  {:>14}  {:>8}\n",
        study.replications, study.redraws, "lambda", "empirical_rmse", "mean_rmsep", "ratio"
    );
    for c in &study.calibration {
        let ratio = if c.empirical_rmse > 0.0 {
            format!("{:.2}", c.mean_estimated_rmsep / c.empirical_rmse)
        } else {
            "-".to_string()
        };
        let _ = writeln!(
            out,
            "{:>7}  {:>14.1}  {:>14.1}  {:>8}",
            c.lambda, c.empirical_rmse, c.mean_estimated_rmsep, ratio
        );
    }
    out
}

/// `simulate`: run the Monte Carlo study described by a config file and
/// summarize empirical versus estimated prediction error per `λ`.
pub fn cmd_simulate(
    config: &Path,
    seed_override: Option<u64>,
    format: OutputFormat,
) -> Result<String> {
    let text = std::fs::read_to_string(config)?;
    let mut cfg = SimConfig::parse(&text)?;
    if let Some(seed) = seed_override {
        cfg.seed = seed;
    }
    let study = run_study(&cfg, &cfg.lambda_grid)?;
    Ok(match format {
        OutputFormat::Text => study_text(&study),
        OutputFormat::Csv => study_csv(&study),
        OutputFormat::Json => {
            let doc = SimulateDocument {
                schema_version: SCHEMA_VERSION,
                config_file: config.display().to_string(),
                config_sha256: sha256_hex(text.as_bytes()),
                seed: cfg.seed,
                replications: study.replications,
                redraws: study.redraws,
                calibration: study
                    .calibration
                    .iter()
                    .map(|c| CalibrationRecord {
                        lambda: c.lambda,
                        empirical_rmse: c.empirical_rmse,
                        mean_estimated_rmsep: c.mean_estimated_rmsep,
                        mean_reserves: c.mean_reserves,
                    })
                    .collect(),
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("study serializes");
            s.push('\n');
            s
        }
    })
}
