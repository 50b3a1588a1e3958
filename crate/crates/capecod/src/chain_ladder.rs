//! Mack chain-ladder estimation.
//!
//! Development factors are the volume-weighted ratios
//! `f_j = Σ_i C[i][j+1] / Σ_i C[i][j]` over the accident years that have
//! both columns observed. The variance parameters follow Mack's unbiased
//! estimator with the standard extrapolation rule for the last period,
//! `σ²_{J-1} = min{σ⁴_{J-2}/σ²_{J-3}, σ²_{J-3}, σ²_{J-2}}`. The development
//! pattern is identified from the factors as `β_j = Π_{k=j}^{J-1} 1/f_k`
//! with `β_J = 1`: the expected fraction of the ultimate claim emerged by
//! period `j`.

use crate::error::{Error, Result};
use crate::triangle::ClaimsTriangle;

/// Chain-ladder fit: factors, variance parameters and development pattern.
#[derive(Debug, Clone)]
pub struct ClFit {
    /// Development factors `f_j`, length `J`.
    pub factors: Vec<f64>,
    /// Variance parameters `σ²_j`, length `J`.
    pub sigma2: Vec<f64>,
    /// Development pattern `β_j`, length `J + 1`, normalized to `β_J = 1`.
    pub pattern: Vec<f64>,
}

impl ClFit {
    /// Fit factors, variance parameters and pattern in one pass.
    ///
    /// Requires `J >= 3` because the variance tail rule needs the two
    /// preceding estimates; for smaller triangles use [`fit_cl_factors`]
    /// and [`pattern_from_factors`] directly (reserves only, no MSEP).
    pub fn fit(tri: &ClaimsTriangle) -> Result<Self> {
        let factors = fit_cl_factors(tri);
        let sigma2 = fit_sigma2(tri, &factors)?;
        let pattern = pattern_from_factors(&factors)?;
        Ok(Self {
            factors,
            sigma2,
            pattern,
        })
    }
}

/// Volume-weighted development factor estimates, length `J`.
pub fn fit_cl_factors(tri: &ClaimsTriangle) -> Vec<f64> {
    let years = tri.accident_years();
    let devs = tri.dev_periods();
    let mut factors = Vec::with_capacity(devs);
    for j in 0..devs {
        let mut num = 0.0;
        let mut den = 0.0;
        // Rows with both columns j and j+1 observed: 0 ..= I - j - 2.
        for i in 0..years - j - 1 {
            num += tri.row(i)[j + 1];
            den += tri.row(i)[j];
        }
        factors.push(num / den);
    }
    factors
}

/// Variance parameter estimates `σ²_j`, length `J`.
///
/// For `j <= J - 2` this is the unbiased weighted residual variance around
/// `f_j` (divisor: number of observed ratios minus one). The last period
/// has a single observed ratio and is set by the extrapolation rule
/// `σ²_{J-1} = min{σ⁴_{J-2}/σ²_{J-3}, σ²_{J-3}, σ²_{J-2}}`.
pub fn fit_sigma2(tri: &ClaimsTriangle, factors: &[f64]) -> Result<Vec<f64>> {
    let years = tri.accident_years();
    let devs = tri.dev_periods();
    assert_eq!(factors.len(), devs, "factor vector length must be J");
    if devs < 3 {
        return Err(Error::UnsupportedShape(format!(
            "variance estimation needs J >= 3 (tail rule uses σ²_{{J-3}} and σ²_{{J-2}}), got J = {devs}"
        )));
    }
    let mut sigma2 = Vec::with_capacity(devs);
    for (j, &f) in factors.iter().enumerate().take(devs - 1) {
        let pairs = years - j - 1;
        let mut sum = 0.0;
        for i in 0..pairs {
            let c = tri.row(i)[j];
            let ratio = tri.row(i)[j + 1] / c;
            sum += c * (ratio - f) * (ratio - f);
        }
        sigma2.push(sum / (pairs - 1) as f64);
    }
    sigma2.push(tail_sigma2(sigma2[devs - 3], sigma2[devs - 2]));
    Ok(sigma2)
}

/// Extrapolation rule for the last variance parameter.
///
/// When `σ²_{J-3} = 0` the ratio term is taken as `+∞` if `σ²_{J-2} > 0`
/// and as `0` otherwise, so the minimum stays finite.
fn tail_sigma2(s2_jm3: f64, s2_jm2: f64) -> f64 {
    let ratio = if s2_jm3 == 0.0 {
        if s2_jm2 > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    } else {
        s2_jm2 * s2_jm2 / s2_jm3
    };
    ratio.min(s2_jm3).min(s2_jm2)
}

/// Development pattern from factors: `β_j = Π_{k=j}^{J-1} 1/f_k`, `β_J = 1`.
pub fn pattern_from_factors(factors: &[f64]) -> Result<Vec<f64>> {
    for (j, &f) in factors.iter().enumerate() {
        if f <= 0.0 || f.is_nan() {
            return Err(Error::Domain(format!(
                "development factor f_{j} = {f} must be strictly positive"
            )));
        }
    }
    let mut pattern = vec![1.0; factors.len() + 1];
    for j in (0..factors.len()).rev() {
        pattern[j] = pattern[j + 1] / factors[j];
    }
    Ok(pattern)
}

/// Chain-ladder predictors: the latest diagonal rolled forward with the
/// estimated factors.
#[derive(Debug, Clone)]
pub struct ClPrediction {
    /// Ultimate predictors per accident year, length `I`.
    pub ultimates: Vec<f64>,
    // fitted[i][j - (J - i)] = predicted C[i][j] for j = J-i ..= J,
    // anchored at the observed diagonal.
    fitted: Vec<Vec<f64>>,
}

impl ClPrediction {
    /// Predicted cumulative claim for `year` at development period `dev`,
    /// defined on and beyond the diagonal (`dev >= J - year`).
    pub fn fitted(&self, year: usize, dev: usize) -> Option<f64> {
        let start = self.fitted.len() - 1 - year;
        dev.checked_sub(start)
            .and_then(|k| self.fitted[year].get(k).copied())
    }

    /// Outstanding loss liabilities per year: ultimate minus diagonal.
    pub fn reserves(&self, tri: &ClaimsTriangle) -> (Vec<f64>, f64) {
        let diag = tri.latest_diagonal();
        let per_year: Vec<f64> = self
            .ultimates
            .iter()
            .zip(&diag)
            .map(|(u, d)| u - d)
            .collect();
        let total = per_year.iter().sum();
        (per_year, total)
    }
}

/// Roll the diagonal forward: `C[i][j] = C[i][J-i] · Π_{k=J-i}^{j-1} f_k`.
pub fn cl_predict(tri: &ClaimsTriangle, factors: &[f64]) -> ClPrediction {
    let years = tri.accident_years();
    let devs = tri.dev_periods();
    assert_eq!(factors.len(), devs, "factor vector length must be J");
    let diag = tri.latest_diagonal();
    let mut fitted = Vec::with_capacity(years);
    for (i, &anchor) in diag.iter().enumerate() {
        let start = devs - i;
        let mut row = Vec::with_capacity(i + 1);
        let mut c = anchor;
        row.push(c);
        for &f in &factors[start..] {
            c *= f;
            row.push(c);
        }
        fitted.push(row);
    }
    let ultimates = fitted
        .iter()
        .map(|row| *row.last().expect("non-empty"))
        .collect();
    ClPrediction { ultimates, fitted }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testdata;

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn single_ratio_factor() {
        let tri = ClaimsTriangle::from_rows(vec![vec![100.0, 150.0], vec![120.0]]).unwrap();
        assert_eq!(fit_cl_factors(&tri), vec![1.5]);
        let pred = cl_predict(&tri, &[1.5]);
        assert_eq!(pred.ultimates, vec![150.0, 180.0]);
        assert_eq!(pred.fitted(1, 0), Some(120.0));
        assert_eq!(pred.fitted(1, 1), Some(180.0));
        assert_eq!(pred.fitted(0, 0), None);
    }

    #[test]
    fn constant_development_gives_constant_factors() {
        let tri = ClaimsTriangle::from_rows(vec![
            vec![1.0, 2.0, 4.0, 8.0],
            vec![3.0, 6.0, 12.0],
            vec![5.0, 10.0],
            vec![7.0],
        ])
        .unwrap();
        assert_eq!(fit_cl_factors(&tri), vec![2.0, 2.0, 2.0]);
        // Perfectly multiplicative development has zero residual variance,
        // including the extrapolated tail.
        let s2 = fit_sigma2(&tri, &[2.0, 2.0, 2.0]).unwrap();
        assert_eq!(s2, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn tail_rule_direct_evaluation() {
        assert_eq!(tail_sigma2(4.0, 2.0), 1.0);
        assert_eq!(tail_sigma2(1.0, 3.0), 1.0);
        // Degenerate cases keep the minimum finite.
        assert_eq!(tail_sigma2(0.0, 2.0), 0.0);
        assert_eq!(tail_sigma2(0.0, 0.0), 0.0);
    }

    #[test]
    fn sigma2_needs_j_at_least_three() {
        let tri = ClaimsTriangle::from_rows(vec![
            vec![100.0, 150.0, 160.0],
            vec![110.0, 160.0],
            vec![120.0],
        ])
        .unwrap();
        let f = fit_cl_factors(&tri);
        assert!(matches!(
            fit_sigma2(&tri, &f),
            Err(Error::UnsupportedShape(_))
        ));
    }

    #[test]
    fn pattern_examples() {
        assert_eq!(
            pattern_from_factors(&[2.0, 2.0]).unwrap(),
            vec![0.25, 0.5, 1.0]
        );
        assert_eq!(
            pattern_from_factors(&[1.0, 1.0, 1.0]).unwrap(),
            vec![1.0; 4]
        );
        assert!(matches!(
            pattern_from_factors(&[1.2, 0.0]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            pattern_from_factors(&[1.2, -0.4]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn fully_developed_year_has_zero_reserve() {
        let tri = testdata::wm2008_triangle();
        let pred = cl_predict(&tri, &fit_cl_factors(&tri));
        let (per_year, _) = pred.reserves(&tri);
        assert_eq!(per_year[0], 0.0);
        assert_eq!(pred.ultimates[0], tri.get(0, 9).unwrap());
    }

    #[test]
    fn bundled_dataset_reproduces_published_cl_reserves() {
        let tri = testdata::wm2008_triangle();
        let fit = ClFit::fit(&tri).unwrap();
        let pred = cl_predict(&tri, &fit.factors);
        let (_, total) = pred.reserves(&tri);
        // Published total chain-ladder reserves: 6,047,064 (6,047 in 10^3 units).
        assert_eq!((total / 1e3).round(), 6047.0);
        assert_eq!(fit.pattern[9 + 1 - 1], 1.0);
    }

    #[test]
    fn anchored_at_diagonal_and_product_identity() {
        let tri = testdata::wm2008_triangle();
        let fit = ClFit::fit(&tri).unwrap();
        let pred = cl_predict(&tri, &fit.factors);
        let diag = tri.latest_diagonal();
        for (i, &anchor) in diag.iter().enumerate() {
            let d = tri.diagonal_dev(i);
            assert_eq!(pred.fitted(i, d), Some(anchor));
            // ultimate * β_{J-i} = diagonal
            assert!(rel_err(pred.ultimates[i] * fit.pattern[d], anchor) < 1e-12);
        }
    }

    proptest::proptest! {
        #[test]
        fn factor_scale_equivariance(seed in 0u64..100, years in 4usize..11, scale in 0.1f64..50.0) {
            let tri = testdata::random_triangle(seed, years);
            let scaled = ClaimsTriangle::from_rows(
                (0..years).map(|i| tri.row(i).iter().map(|c| c * scale).collect()).collect(),
            ).unwrap();
            let f = fit_cl_factors(&tri);
            let fs = fit_cl_factors(&scaled);
            for (a, b) in f.iter().zip(&fs) {
                proptest::prop_assert!(rel_err(*a, *b) < 1e-12);
            }
            let u = cl_predict(&tri, &f).ultimates;
            let us = cl_predict(&scaled, &fs).ultimates;
            for (a, b) in u.iter().zip(&us) {
                proptest::prop_assert!(rel_err(a * scale, *b) < 1e-12);
            }
        }

        #[test]
        fn factor_is_a_weighted_mean_of_ratios(seed in 0u64..100, years in 4usize..11) {
            let tri = testdata::random_triangle(seed, years);
            let f = fit_cl_factors(&tri);
            for (j, &fj) in f.iter().enumerate() {
                let ratios: Vec<f64> = (0..years - j - 1)
                    .map(|i| tri.row(i)[j + 1] / tri.row(i)[j])
                    .collect();
                let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                proptest::prop_assert!(fj >= lo - 1e-12 && fj <= hi + 1e-12);
            }
        }

        #[test]
        fn pattern_product_identity(seed in 0u64..100, years in 4usize..11) {
            let tri = testdata::random_triangle(seed, years);
            let f = fit_cl_factors(&tri);
            let beta = pattern_from_factors(&f).unwrap();
            for j in 0..f.len() {
                let prod: f64 = f[j..].iter().product();
                proptest::prop_assert!(rel_err(beta[j] * prod, 1.0) < 1e-12);
            }
        }
    }
}
