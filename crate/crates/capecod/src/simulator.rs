//! Monte Carlo generation of synthetic claims triangles.
//!
//! Paths follow the distribution-free development dynamics — conditional
//! mean `f_j C[i][j]` and conditional variance `σ²_j C[i][j]` — with a
//! concrete positive family (gamma or lognormal) moment-matched to those
//! two conditional moments. The first column is drawn around its expected
//! value `β_0 κ π_i` with variance `σ²_0 β_0 κ π_i`, the same two-moment
//! rule applied to the initial level. Any family matching the first two
//! conditional moments is admissible for validating a two-moment
//! uncertainty estimator, which is exactly what [`run_study`] does: it
//! compares the average estimated RMSEP against the empirical prediction
//! error over many replications.
//!
//! Replications draw from per-replication substreams derived from the seed,
//! so results do not depend on evaluation order. A replication that
//! produces a non-positive cell (underflow at extreme variance levels) is
//! redrawn; the study aborts if more than 10% of replications redraw.

use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::Distribution;

use crate::chain_ladder::ClFit;
use crate::error::{Error, Result};
use crate::gcc::{gcc_predict, GccInput};
use crate::triangle::{ClaimsTriangle, PremiumVector};
use crate::uncertainty::gcc_msep;

/// Positive two-parameter family for the conditional draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IncrementDistribution {
    Gamma,
    LogNormal,
}

impl IncrementDistribution {
    pub fn parse(tag: &str) -> Result<Self> {
        match tag {
            "gamma" => Ok(Self::Gamma),
            "lognormal" => Ok(Self::LogNormal),
            other => Err(Error::Config(format!(
                "unknown distribution `{other}`, expected `gamma` or `lognormal`"
            ))),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Self::Gamma => "gamma",
            Self::LogNormal => "lognormal",
        }
    }
}

/// Configuration of a simulation study.
///
/// ## Config file format
///
/// One `key = value` pair per line, `#` starts a comment, vectors are
/// comma-separated:
///
/// ```text
/// accident_years = 10
/// dev_periods    = 9
/// factors        = 1.49, 1.08, 1.023, 1.015, 1.007, 1.005, 1.001, 1.001, 1.0014
/// sigma2         = 18000, 1140, 250, 390, 90, 4, 0.7, 0.05, 0.03
/// premiums       = 15000000, 14800000, 14500000, 14000000, 14500000, 15000000, 14800000, 14500000, 14400000, 15200000
/// kappa          = 0.72
/// replications   = 10000
/// seed           = 42
/// distribution   = gamma
/// lambda_grid    = 0, 0.5, 1
/// ```
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub accident_years: usize,
    pub dev_periods: usize,
    /// True development factors, length `J`.
    pub factors: Vec<f64>,
    /// True variance parameters, length `J`.
    pub sigma2: Vec<f64>,
    /// Premiums per accident year, length `I`.
    pub premiums: Vec<f64>,
    /// True claims ratio.
    pub kappa: f64,
    pub replications: usize,
    pub seed: u64,
    pub distribution: IncrementDistribution,
    /// λ values evaluated by [`run_study`].
    pub lambda_grid: Vec<f64>,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.accident_years != self.dev_periods + 1 {
            return Err(Error::Config(format!(
                "accident_years = {} must equal dev_periods + 1 = {}",
                self.accident_years,
                self.dev_periods + 1
            )));
        }
        if self.factors.len() != self.dev_periods {
            return Err(Error::Config(format!(
                "factors has {} entries, expected dev_periods = {}",
                self.factors.len(),
                self.dev_periods
            )));
        }
        if self.sigma2.len() != self.dev_periods {
            return Err(Error::Config(format!(
                "sigma2 has {} entries, expected dev_periods = {}",
                self.sigma2.len(),
                self.dev_periods
            )));
        }
        if self.premiums.len() != self.accident_years {
            return Err(Error::Config(format!(
                "premiums has {} entries, expected accident_years = {}",
                self.premiums.len(),
                self.accident_years
            )));
        }
        if let Some(f) = self.factors.iter().find(|f| !(**f > 0.0 && f.is_finite())) {
            return Err(Error::Config(format!(
                "factor {f} must be strictly positive"
            )));
        }
        if let Some(s) = self.sigma2.iter().find(|s| !(**s >= 0.0 && s.is_finite())) {
            return Err(Error::Config(format!(
                "variance parameter {s} must be non-negative"
            )));
        }
        if let Some(p) = self.premiums.iter().find(|p| !(**p > 0.0 && p.is_finite())) {
            return Err(Error::Config(format!(
                "premium {p} must be strictly positive"
            )));
        }
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return Err(Error::Config(format!(
                "claims ratio kappa = {} must be strictly positive",
                self.kappa
            )));
        }
        if self.replications == 0 {
            return Err(Error::Config("replications must be at least 1".into()));
        }
        if self.lambda_grid.is_empty() {
            return Err(Error::Config("lambda_grid must be non-empty".into()));
        }
        if let Some(l) = self.lambda_grid.iter().find(|l| !(0.0..=1.0).contains(*l)) {
            return Err(Error::Config(format!(
                "lambda_grid entry {l} must lie in [0, 1]"
            )));
        }
        Ok(())
    }

    /// Parse the key-value config format documented on [`SimConfig`].
    pub fn parse(text: &str) -> Result<Self> {
        let mut accident_years = None;
        let mut dev_periods = None;
        let mut factors = None;
        let mut sigma2 = None;
        let mut premiums = None;
        let mut kappa = None;
        let mut replications = None;
        let mut seed = None;
        let mut distribution = None;
        let mut lambda_grid = None;

        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "line {}: expected `key = value`, got `{raw}`",
                    idx + 1
                ))
            })?;
            let key = key.trim();
            let value = value.trim();
            let dup = |k: &str| Error::Config(format!("line {}: duplicate key `{k}`", idx + 1));
            match key {
                "accident_years" => {
                    set_once(&mut accident_years, parse_scalar(key, value)?, || dup(key))?
                }
                "dev_periods" => {
                    set_once(&mut dev_periods, parse_scalar(key, value)?, || dup(key))?
                }
                "factors" => set_once(&mut factors, parse_list(key, value)?, || dup(key))?,
                "sigma2" => set_once(&mut sigma2, parse_list(key, value)?, || dup(key))?,
                "premiums" => set_once(&mut premiums, parse_list(key, value)?, || dup(key))?,
                "kappa" => set_once(&mut kappa, parse_scalar(key, value)?, || dup(key))?,
                "replications" => {
                    set_once(&mut replications, parse_scalar(key, value)?, || dup(key))?
                }
                "seed" => set_once(&mut seed, parse_scalar(key, value)?, || dup(key))?,
                "distribution" => set_once(
                    &mut distribution,
                    IncrementDistribution::parse(value)?,
                    || dup(key),
                )?,
                "lambda_grid" => set_once(&mut lambda_grid, parse_list(key, value)?, || dup(key))?,
                other => {
                    return Err(Error::Config(format!(
                        "line {}: unknown key `{other}`",
                        idx + 1
                    )))
                }
            }
        }

        let missing = |k: &str| Error::Config(format!("missing required key `{k}`"));
        let cfg = SimConfig {
            accident_years: require(accident_years, "accident_years", missing)? as usize,
            dev_periods: require(dev_periods, "dev_periods", missing)? as usize,
            factors: require(factors, "factors", missing)?,
            sigma2: require(sigma2, "sigma2", missing)?,
            premiums: require(premiums, "premiums", missing)?,
            kappa: require(kappa, "kappa", missing)?,
            replications: require(replications, "replications", missing)? as usize,
            seed: require(seed, "seed", missing)? as u64,
            distribution: require(distribution, "distribution", missing)?,
            lambda_grid: lambda_grid.unwrap_or_else(|| vec![0.0, 0.5, 1.0]),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn set_once<T>(slot: &mut Option<T>, value: T, dup: impl Fn() -> Error) -> Result<()> {
    if slot.is_some() {
        return Err(dup());
    }
    *slot = Some(value);
    Ok(())
}

fn require<T>(slot: Option<T>, key: &str, missing: impl Fn(&str) -> Error) -> Result<T> {
    slot.ok_or_else(|| missing(key))
}

fn parse_scalar(key: &str, value: &str) -> Result<f64> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("value `{value}` for `{key}` is not a number")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|v| parse_scalar(key, v.trim()))
        .collect()
}

/// Seed for a replication substream; pure function of the indices so the
/// study is independent of evaluation order.
fn substream_seed(seed: u64, replication: u64, attempt: u64) -> u64 {
    let mut z = seed
        ^ replication.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ attempt.wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One draw from the configured family with the given mean and variance.
fn draw(
    family: IncrementDistribution,
    mean: f64,
    var: f64,
    rng: &mut StdRng,
    year: usize,
    dev: usize,
) -> Result<f64> {
    if !(mean > 0.0 && mean.is_finite()) || !(var >= 0.0 && var.is_finite()) {
        return Err(Error::Config(format!(
            "infeasible parameterization at cell (accident year {}, dev {dev}): \
             mean = {mean}, variance = {var}",
            year + 1
        )));
    }
    if var == 0.0 {
        return Ok(mean);
    }
    let value = match family {
        IncrementDistribution::Gamma => {
            let shape = mean * mean / var;
            let scale = var / mean;
            let gamma = rand_distr::Gamma::new(shape, scale).map_err(|e| {
                Error::Config(format!(
                    "infeasible gamma parameterization at cell (accident year {}, dev {dev}): {e}",
                    year + 1
                ))
            })?;
            gamma.sample(rng)
        }
        IncrementDistribution::LogNormal => {
            let s2 = (1.0 + var / (mean * mean)).ln();
            let mu = mean.ln() - s2 / 2.0;
            let lognormal = rand_distr::LogNormal::new(mu, s2.sqrt()).map_err(|e| {
                Error::Config(format!(
                    "infeasible lognormal parameterization at cell (accident year {}, dev {dev}): {e}",
                    year + 1
                ))
            })?;
            lognormal.sample(rng)
        }
    };
    Ok(value)
}

/// Simulate one portfolio: the full claims square (for realized ultimates)
/// and the observed upper triangle.
///
/// Fails with a validation error when a draw underflows to a non-positive
/// cell; [`run_study`] treats that as a redraw.
pub fn simulate_triangle(
    cfg: &SimConfig,
    rng: &mut StdRng,
) -> Result<(Vec<Vec<f64>>, ClaimsTriangle)> {
    cfg.validate()?;
    let years = cfg.accident_years;
    let devs = cfg.dev_periods;
    let beta0: f64 = cfg.factors.iter().map(|f| 1.0 / f).product();

    let positive = |value: f64, year: usize, dev: usize| -> Result<f64> {
        if value > 0.0 && value.is_finite() {
            Ok(value)
        } else {
            Err(Error::Validation(format!(
                "simulated cell (accident year {}, dev {dev}) = {value} is not positive",
                year + 1
            )))
        }
    };

    let mut square = Vec::with_capacity(years);
    for i in 0..years {
        let mut row = Vec::with_capacity(devs + 1);
        let level = beta0 * cfg.kappa * cfg.premiums[i];
        let mut c = positive(
            draw(cfg.distribution, level, cfg.sigma2[0] * level, rng, i, 0)?,
            i,
            0,
        )?;
        row.push(c);
        for j in 0..devs {
            c = positive(
                draw(
                    cfg.distribution,
                    cfg.factors[j] * c,
                    cfg.sigma2[j] * c,
                    rng,
                    i,
                    j + 1,
                )?,
                i,
                j + 1,
            )?;
            row.push(c);
        }
        square.push(row);
    }

    let observed: Vec<Vec<f64>> = (0..years)
        .map(|i| square[i][..years - i].to_vec())
        .collect();
    let tri = ClaimsTriangle::from_rows(observed)?;
    Ok((square, tri))
}

/// Calibration summary for one `λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaCalibration {
    pub lambda: f64,
    /// `√(mean over replications of (realized - predicted)²)` for the
    /// aggregate ultimate.
    pub empirical_rmse: f64,
    /// Mean of the per-replication estimated RMSEP.
    pub mean_estimated_rmsep: f64,
    pub mean_reserves: f64,
}

/// Full study output: per-replication records plus the calibration summary.
#[derive(Debug, Clone, PartialEq)]
pub struct SimStudy {
    pub lambdas: Vec<f64>,
    pub replications: usize,
    /// Replications redrawn because a simulated cell was non-positive.
    pub redraws: usize,
    /// Realized aggregate ultimate per replication.
    pub realized_totals: Vec<f64>,
    /// Predicted aggregate ultimate per replication and λ.
    pub predicted_totals: Vec<Vec<f64>>,
    /// GCC reserves per replication and λ.
    pub reserves: Vec<Vec<f64>>,
    /// Estimated RMSEP per replication and λ.
    pub estimated_rmsep: Vec<Vec<f64>>,
    pub calibration: Vec<LambdaCalibration>,
}

/// Run the full study: simulate, refit, predict and estimate uncertainty
/// per replication, then aggregate the calibration summary per `λ`.
pub fn run_study(cfg: &SimConfig, lambda_grid: &[f64]) -> Result<SimStudy> {
    cfg.validate()?;
    if cfg.dev_periods < 3 {
        return Err(Error::UnsupportedShape(format!(
            "uncertainty estimation in the study needs dev_periods >= 3, got {}",
            cfg.dev_periods
        )));
    }
    let premiums = PremiumVector::new(cfg.premiums.clone())?;
    let reps = cfg.replications;
    let max_redraws = reps / 10;

    let mut redraws = 0usize;
    let mut realized_totals = Vec::with_capacity(reps);
    let mut predicted_totals = Vec::with_capacity(reps);
    let mut reserves = Vec::with_capacity(reps);
    let mut estimated_rmsep = Vec::with_capacity(reps);

    for rep in 0..reps {
        let (square, tri) = {
            let mut attempt = 0u64;
            loop {
                let mut rng = StdRng::seed_from_u64(substream_seed(cfg.seed, rep as u64, attempt));
                match simulate_triangle(cfg, &mut rng) {
                    Ok(result) => break result,
                    Err(Error::Validation(_)) => {
                        redraws += 1;
                        if redraws > max_redraws {
                            return Err(Error::Config(format!(
                                "redraw rate exceeded 10% ({redraws} redraws in {} replications); \
                                 the variance level is too extreme for positive paths",
                                rep + 1
                            )));
                        }
                        attempt += 1;
                    }
                    Err(other) => return Err(other),
                }
            }
        };

        let realized: f64 = square.iter().map(|row| row[cfg.dev_periods]).sum();
        realized_totals.push(realized);

        let fit = ClFit::fit(&tri)?;
        let mut rep_predicted = Vec::with_capacity(lambda_grid.len());
        let mut rep_reserves = Vec::with_capacity(lambda_grid.len());
        let mut rep_rmsep = Vec::with_capacity(lambda_grid.len());
        for &lambda in lambda_grid {
            let input = GccInput::new(&tri, &premiums, &fit.pattern, lambda)?;
            let result = gcc_predict(&input);
            rep_predicted.push(result.ultimates.iter().sum());
            rep_reserves.push(result.reserves_total);
            rep_rmsep.push(gcc_msep(&tri, &premiums, &fit, lambda)?.rmsep);
        }
        predicted_totals.push(rep_predicted);
        reserves.push(rep_reserves);
        estimated_rmsep.push(rep_rmsep);
    }

    let calibration = lambda_grid
        .iter()
        .enumerate()
        .map(|(k, &lambda)| {
            let mse: f64 = (0..reps)
                .map(|r| {
                    let err = realized_totals[r] - predicted_totals[r][k];
                    err * err
                })
                .sum::<f64>()
                / reps as f64;
            LambdaCalibration {
                lambda,
                empirical_rmse: mse.sqrt(),
                mean_estimated_rmsep: (0..reps).map(|r| estimated_rmsep[r][k]).sum::<f64>()
                    / reps as f64,
                mean_reserves: (0..reps).map(|r| reserves[r][k]).sum::<f64>() / reps as f64,
            }
        })
        .collect();

    Ok(SimStudy {
        lambdas: lambda_grid.to_vec(),
        replications: reps,
        redraws,
        realized_totals,
        predicted_totals,
        reserves,
        estimated_rmsep,
        calibration,
    })
}

/// A 10-year configuration consistent with the development dynamics of the
/// bundled portfolio; used by the `simulate` command defaults and tests.
pub fn default_ten_year_config() -> SimConfig {
    SimConfig {
        accident_years: 10,
        dev_periods: 9,
        factors: vec![
            1.49, 1.08, 1.023, 1.015, 1.007, 1.005, 1.0011, 1.001, 1.0014,
        ],
        sigma2: vec![18000.0, 1140.0, 250.0, 390.0, 90.0, 4.0, 0.7, 0.05, 0.03],
        premiums: vec![
            15473558.0, 14882436.0, 14456039.0, 14054917.0, 14525373.0, 15025923.0, 14832965.0,
            14550359.0, 14461781.0, 15210363.0,
        ],
        kappa: 0.72,
        replications: 1000,
        seed: 1,
        distribution: IncrementDistribution::Gamma,
        lambda_grid: vec![0.0, 0.5, 1.0],
    }
}
