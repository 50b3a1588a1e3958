//! Cape Cod and generalized Cape Cod claims-ratio estimation and reserving.
//!
//! The individual claims ratio of accident year `i` grosses the latest
//! diagonal up to ultimate and divides by premium,
//! `κ_i = C[i][J-i] / (β_{J-i} π_i)`; it equals the chain-ladder ultimate per
//! unit premium. The Cape Cod ratio pools all years,
//! `κ_CC = Σ_i C[i][J-i] / Σ_i β_{J-i} π_i`. The generalized Cape Cod ratio
//! re-weights the pooling with exponential distance weights `λ^|i-l|`:
//!
//! ```text
//! κ_i(λ) = Σ_l  β_{J-l} π_l λ^|i-l| / (Σ_k β_{J-k} π_k λ^|i-k|) · κ_l
//! ```
//!
//! with the convention `λ^0 = 1` even at `λ = 0`, so `λ = 0` recovers the
//! individual ratios (chain-ladder) pointwise and `λ = 1` the Cape Cod
//! ratio. The predictor replaces the expected unemerged part by the
//! exposure-based estimate: `C[i][J-i] + (1 - β_{J-i}) κ_i(λ) π_i`.

use crate::error::{Error, Result};
use crate::triangle::{ClaimsTriangle, PremiumVector};

/// `λ^d` with `λ^0 = 1` exactly, also at `λ = 0`.
pub(crate) fn lambda_pow(lambda: f64, distance: usize) -> f64 {
    if distance == 0 {
        1.0
    } else if lambda == 0.0 {
        0.0
    } else {
        (distance as f64 * lambda.ln()).exp()
    }
}

/// Validated inputs for a generalized Cape Cod evaluation at one `λ`.
#[derive(Debug, Clone, Copy)]
pub struct GccInput<'a> {
    pub tri: &'a ClaimsTriangle,
    pub premiums: &'a PremiumVector,
    /// Development pattern `β_j`, length `J + 1` (chain-ladder implied).
    pub pattern: &'a [f64],
    /// Decay factor in `[0, 1]`.
    pub lambda: f64,
}

impl<'a> GccInput<'a> {
    pub fn new(
        tri: &'a ClaimsTriangle,
        premiums: &'a PremiumVector,
        pattern: &'a [f64],
        lambda: f64,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Domain(format!(
                "decay factor lambda = {lambda} must lie in [0, 1]"
            )));
        }
        let years = tri.accident_years();
        if premiums.len() != years {
            return Err(Error::Shape(format!(
                "premium vector has {} entries for {} accident years",
                premiums.len(),
                years
            )));
        }
        if pattern.len() != tri.dev_periods() + 1 {
            return Err(Error::Shape(format!(
                "development pattern has {} entries, expected J + 1 = {}",
                pattern.len(),
                tri.dev_periods() + 1
            )));
        }
        Ok(Self {
            tri,
            premiums,
            pattern,
            lambda,
        })
    }

    /// `β_{J-i} π_i` for each year: the exposure weight of the observed part.
    fn emerged_exposure(&self) -> Vec<f64> {
        (0..self.tri.accident_years())
            .map(|i| self.pattern[self.tri.diagonal_dev(i)] * self.premiums.get(i))
            .collect()
    }
}

/// Individual claims ratios `κ_i = C[i][J-i] / (β_{J-i} π_i)`.
pub fn individual_claims_ratios(
    tri: &ClaimsTriangle,
    premiums: &PremiumVector,
    pattern: &[f64],
) -> Vec<f64> {
    tri.latest_diagonal()
        .iter()
        .enumerate()
        .map(|(i, &diag)| diag / (pattern[tri.diagonal_dev(i)] * premiums.get(i)))
        .collect()
}

/// Pooled Cape Cod claims ratio `κ_CC = Σ_i C[i][J-i] / Σ_i β_{J-i} π_i`.
pub fn cc_claims_ratio(tri: &ClaimsTriangle, premiums: &PremiumVector, pattern: &[f64]) -> f64 {
    let num: f64 = tri.latest_diagonal().iter().sum();
    let den: f64 = (0..tri.accident_years())
        .map(|i| pattern[tri.diagonal_dev(i)] * premiums.get(i))
        .sum();
    num / den
}

/// Generalized Cape Cod claims ratios `κ_i(λ)`, length `I`.
pub fn gcc_claims_ratios(input: &GccInput) -> Vec<f64> {
    let kappas = individual_claims_ratios(input.tri, input.premiums, input.pattern);
    let weights = input.emerged_exposure();
    let years = kappas.len();
    (0..years)
        .map(|i| {
            let mut num = 0.0;
            let mut den = 0.0;
            for l in 0..years {
                let w = weights[l] * lambda_pow(input.lambda, i.abs_diff(l));
                num += w * kappas[l];
                den += w;
            }
            num / den
        })
        .collect()
}

/// Generalized Cape Cod prediction at one `λ`.
#[derive(Debug, Clone)]
pub struct GccResult {
    pub lambda: f64,
    /// Individual claims ratios `κ_i`.
    pub individual_ratios: Vec<f64>,
    /// Credibility-blended ratios `κ_i(λ)`.
    pub gcc_ratios: Vec<f64>,
    /// Ultimate predictors per accident year.
    pub ultimates: Vec<f64>,
    /// Total reserves: `Σ_i (ultimate_i - diagonal_i)`.
    pub reserves_total: f64,
    // fitted[i][j - (J - i)] = predicted C[i][j], j = J-i ..= J.
    fitted: Vec<Vec<f64>>,
}

impl GccResult {
    /// Predicted cumulative claim for `year` at `dev >= J - year`:
    /// `C[i][J-i] + (β_j - β_{J-i}) κ_i(λ) π_i`.
    pub fn fitted(&self, year: usize, dev: usize) -> Option<f64> {
        let start = self.fitted.len() - 1 - year;
        dev.checked_sub(start)
            .and_then(|k| self.fitted[year].get(k).copied())
    }
}

/// Evaluate the generalized Cape Cod predictor.
pub fn gcc_predict(input: &GccInput) -> GccResult {
    let tri = input.tri;
    let years = tri.accident_years();
    let devs = tri.dev_periods();
    let individual = individual_claims_ratios(tri, input.premiums, input.pattern);
    let blended = gcc_claims_ratios(input);
    let diag = tri.latest_diagonal();

    let mut fitted = Vec::with_capacity(years);
    let mut ultimates = Vec::with_capacity(years);
    for i in 0..years {
        let start = devs - i;
        let scale = blended[i] * input.premiums.get(i);
        let row: Vec<f64> = (start..=devs)
            .map(|j| diag[i] + (input.pattern[j] - input.pattern[start]) * scale)
            .collect();
        ultimates.push(*row.last().expect("non-empty"));
        fitted.push(row);
    }
    let reserves_total = ultimates.iter().zip(&diag).map(|(u, d)| u - d).sum();
    GccResult {
        lambda: input.lambda,
        individual_ratios: individual,
        gcc_ratios: blended,
        ultimates,
        reserves_total,
        fitted,
    }
}

/// Per-year outstanding loss liabilities and their total.
pub fn gcc_reserves(result: &GccResult, tri: &ClaimsTriangle) -> (Vec<f64>, f64) {
    let diag = tri.latest_diagonal();
    let per_year: Vec<f64> = result
        .ultimates
        .iter()
        .zip(&diag)
        .map(|(u, d)| u - d)
        .collect();
    let total = per_year.iter().sum();
    (per_year, total)
}

/// Pooling weights `α_{i,l}(λ)`: each row is a probability vector over the
/// accident years; `λ = 0` degenerates to the identity matrix, `λ = 1`
/// makes all rows identical (full pooling).
pub fn alpha_weights(input: &GccInput) -> Vec<Vec<f64>> {
    let weights = input.emerged_exposure();
    let years = weights.len();
    (0..years)
        .map(|i| {
            let row: Vec<f64> = (0..years)
                .map(|l| weights[l] * lambda_pow(input.lambda, i.abs_diff(l)))
                .collect();
            let sum: f64 = row.iter().sum();
            row.into_iter().map(|w| w / sum).collect()
        })
        .collect()
}

/// Credibility weights `ω_{i,l}(λ) = β_{J-i} 1{i=l} + (1 - β_{J-i}) α_{i,l}(λ)`.
///
/// They reconstruct the predictor from the chain-ladder ultimates:
/// `Ĉ_i(λ) = ω_{i,i} Ĉ_i^CL + Σ_{l≠i} ω_{i,l} (π_i/π_l) Ĉ_l^CL`.
pub fn omega_weights(input: &GccInput) -> Vec<Vec<f64>> {
    let alpha = alpha_weights(input);
    alpha
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            let beta = input.pattern[input.tri.diagonal_dev(i)];
            row.into_iter()
                .enumerate()
                .map(|(l, a)| {
                    if i == l {
                        beta + (1.0 - beta) * a
                    } else {
                        (1.0 - beta) * a
                    }
                })
                .collect()
        })
        .collect()
}

/// Two-term credibility split of `κ_i(λ)` into the year's own ratio and the
/// leave-one-out pooled experience.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CredibilitySplit {
    /// Weight `z_i` on the year's own claims ratio.
    pub own_weight: f64,
    /// Leave-one-out pooled ratio; `None` at `λ = 0` where every other
    /// year has zero weight (then `z_i = 1`).
    pub pooled: Option<f64>,
}

/// `κ_i(λ) = z_i κ_i + (1 - z_i) · pooled`, with
/// `z_i = β_{J-i} π_i / Σ_k β_{J-k} π_k λ^|i-k|`.
pub fn credibility_decomposition(input: &GccInput, year: usize) -> CredibilitySplit {
    let weights = input.emerged_exposure();
    let years = weights.len();
    let diag = input.tri.latest_diagonal();
    let den: f64 = (0..years)
        .map(|k| weights[k] * lambda_pow(input.lambda, year.abs_diff(k)))
        .sum();
    let own_weight = weights[year] / den;
    let pooled_num: f64 = (0..years)
        .filter(|&l| l != year)
        .map(|l| diag[l] * lambda_pow(input.lambda, year.abs_diff(l)))
        .sum();
    let pooled_den: f64 = (0..years)
        .filter(|&k| k != year)
        .map(|k| weights[k] * lambda_pow(input.lambda, year.abs_diff(k)))
        .sum();
    if pooled_den == 0.0 {
        CredibilitySplit {
            own_weight: 1.0,
            pooled: None,
        }
    } else {
        CredibilitySplit {
            own_weight,
            pooled: Some(pooled_num / pooled_den),
        }
    }
}
