//! Prediction uncertainty for the generalized Cape Cod reserves.
//!
//! The conditional mean squared error of prediction of the aggregate
//! ultimate splits into process variance and parameter estimation error.
//! Process variance follows Mack's form evaluated on the GCC fitted values,
//!
//! ```text
//! Ψ²(λ) = Σ_i Ĉ_i(λ)² Σ_{j=J-i}^{J-1} (σ²_j/f²_j) / Ĉ_{i,j}(λ) .
//! ```
//!
//! The estimation error is obtained by first-order error propagation in the
//! development factors: on the log scale the aggregate predictor has
//! elasticities `q_t(λ) = ∂ log Σ_i Ĉ_i(λ) / ∂ log f_t`, available in
//! closed form (see [`q_sensitivities`]), and
//!
//! ```text
//! Δ²(λ) = (Σ_i Ĉ_i(λ))² Σ_j q_j(λ)² (σ²_j/f²_j) / Σ_ℓ C[ℓ][j] .
//! ```
//!
//! At `λ = 0` both terms collapse to Mack's classical chain-ladder
//! estimates; the two-term (diagonal plus cross-term) form of Mack's
//! parameter error is kept in [`mack_param_error`] as an independent
//! cross-check of the same quantity.

use crate::chain_ladder::{cl_predict, ClFit};
use crate::error::{Error, Result};
use crate::gcc::{gcc_claims_ratios, gcc_predict, lambda_pow, GccInput, GccResult};
use crate::triangle::{ClaimsTriangle, PremiumVector};

/// Log-scale sensitivities `q_t(λ)` of the aggregate predictor with respect
/// to the development factors, `t = 0..J-1`. Dimensionless, in `(0, 1]` for
/// non-decreasing patterns.
#[derive(Debug, Clone)]
pub struct SensitivityVector {
    pub q: Vec<f64>,
}

impl SensitivityVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.q
    }
}

/// Closed-form elasticities of the aggregate GCC predictor in the factors
/// (accident years 1-based here):
///
/// ```text
///          Σ_{i≥I-t} β_{J-i} κ_i(λ) π_i
///            + Σ_i (1-β_{J-i}) κ_i(λ) π_i · Σ_{k≥I-t} β_{J-k} π_k λ^|i-k|
///                                           ───────────────────────────
///                                           Σ_k β_{J-k} π_k λ^|i-k|
/// q_t(λ) = ───────────────────────────────────────────────────────────
///          Σ_i Ĉ_i(λ)
/// ```
///
/// All parameters enter through their estimates: the same pattern drives
/// the claims ratios and the predictor.
pub fn q_sensitivities(
    tri: &ClaimsTriangle,
    premiums: &PremiumVector,
    pattern: &[f64],
    lambda: f64,
) -> Result<SensitivityVector> {
    let input = GccInput::new(tri, premiums, pattern, lambda)?;
    let years = tri.accident_years();
    let devs = tri.dev_periods();
    let diag = tri.latest_diagonal();
    let blended = gcc_claims_ratios(&input);

    let emerged: Vec<f64> = (0..years)
        .map(|k| pattern[tri.diagonal_dev(k)] * premiums.get(k))
        .collect();
    let total: f64 = (0..years)
        .map(|i| diag[i] + (1.0 - pattern[tri.diagonal_dev(i)]) * blended[i] * premiums.get(i))
        .sum();

    // Suffix sums over accident years: of β κ(λ) π for the first term, and
    // per year i of the λ-weights for the second term's inner ratio.
    let mut observed_suffix = vec![0.0; years + 1];
    for r in (0..years).rev() {
        observed_suffix[r] = observed_suffix[r + 1] + emerged[r] * blended[r];
    }
    let mut unobserved = vec![0.0; years]; // (1-β_{J-i}) κ_i(λ) π_i
    let mut weight_suffix = vec![vec![0.0; years + 1]; years];
    for i in 0..years {
        unobserved[i] = (1.0 - pattern[tri.diagonal_dev(i)]) * blended[i] * premiums.get(i);
        for k in (0..years).rev() {
            weight_suffix[i][k] =
                weight_suffix[i][k + 1] + emerged[k] * lambda_pow(lambda, i.abs_diff(k));
        }
    }

    let mut q = Vec::with_capacity(devs);
    for t in 0..devs {
        // 1-based i ≥ I - t is 0-based r ≥ J - t.
        let cutoff = devs - t;
        let mut numerator = observed_suffix[cutoff];
        for i in 0..years {
            numerator += unobserved[i] * weight_suffix[i][cutoff] / weight_suffix[i][0];
        }
        q.push(numerator / total);
    }
    Ok(SensitivityVector { q })
}

/// Mack's parameter estimation error `Δ²` for the chain-ladder predictor,
/// in the literal diagonal-plus-cross-term form:
///
/// ```text
/// Δ² = Σ_i Ĉ_i² W_i + 2 Σ_{i<k} Ĉ_i Ĉ_k W_i ,
/// W_i = Σ_{j=J-i}^{J-1} (σ²_j/f²_j) / Σ_ℓ C[ℓ][j] ,
/// ```
///
/// with the cross-term running over the shared (later) factor window.
pub fn mack_param_error(tri: &ClaimsTriangle, fit: &ClFit) -> f64 {
    let years = tri.accident_years();
    let devs = tri.dev_periods();
    let ultimates = cl_predict(tri, &fit.factors).ultimates;
    let weights = factor_error_weights(tri, fit);

    let window: Vec<f64> = (0..years)
        .map(|r| weights[tri.diagonal_dev(r)..devs].iter().sum())
        .collect();

    let mut total = 0.0;
    for r in 0..years {
        total += ultimates[r] * ultimates[r] * window[r];
    }
    for r in 0..years {
        for k in r + 1..years {
            // r < k: year r is the more developed one, so its factor window
            // is the intersection of the two.
            total += 2.0 * ultimates[r] * ultimates[k] * window[r];
        }
    }
    total
}

/// Parameter estimation error `Δ²(λ)` of the generalized Cape Cod predictor
/// by error propagation.
pub fn gcc_param_error(
    tri: &ClaimsTriangle,
    premiums: &PremiumVector,
    fit: &ClFit,
    lambda: f64,
) -> Result<f64> {
    let input = GccInput::new(tri, premiums, &fit.pattern, lambda)?;
    let total: f64 = gcc_predict(&input).ultimates.iter().sum();
    let q = q_sensitivities(tri, premiums, &fit.pattern, lambda)?;
    let weights = factor_error_weights(tri, fit);
    let sum: f64 = q.q.iter().zip(&weights).map(|(qj, w)| qj * qj * w).sum();
    Ok(total * total * sum)
}

/// Per-factor error weights `(σ²_j/f²_j) / Σ_ℓ C[ℓ][j]`, the first-order
/// estimation variance of `log f_j`.
fn factor_error_weights(tri: &ClaimsTriangle, fit: &ClFit) -> Vec<f64> {
    let years = tri.accident_years();
    (0..tri.dev_periods())
        .map(|j| {
            let column: f64 = (0..years - j - 1).map(|r| tri.row(r)[j]).sum();
            fit.sigma2[j] / (fit.factors[j] * fit.factors[j]) / column
        })
        .collect()
}

/// Process variance `Ψ²(λ)` over the GCC fitted values.
pub fn gcc_process_var(result: &GccResult, fit: &ClFit) -> Result<f64> {
    let years = result.ultimates.len();
    let devs = years - 1;
    let mut total = 0.0;
    for i in 0..years {
        let mut inner = 0.0;
        for j in (devs - i)..devs {
            let fitted = result.fitted(i, j).expect("on or beyond the diagonal");
            if fitted <= 0.0 {
                return Err(Error::Domain(format!(
                    "fitted value for accident year {} at dev {j} is {fitted}; process \
                     variance needs positive fitted claims",
                    i + 1
                )));
            }
            inner += fit.sigma2[j] / (fit.factors[j] * fit.factors[j]) / fitted;
        }
        total += result.ultimates[i] * result.ultimates[i] * inner;
    }
    Ok(total)
}

/// Prediction uncertainty report for one `λ`.
#[derive(Debug, Clone)]
pub struct MsepReport {
    pub lambda: f64,
    /// Process variance `Ψ²(λ)` (squared currency units).
    pub process_var: f64,
    /// Parameter estimation error `Δ²(λ)` (squared currency units).
    pub param_error: f64,
    /// `Ψ² + Δ²`.
    pub msep: f64,
    /// `√msep`.
    pub rmsep: f64,
    /// Matching GCC reserves.
    pub reserves_total: f64,
    /// `rmsep / reserves_total`; `None` when the reserves are not positive.
    pub cova: Option<f64>,
}

/// Assemble process variance, parameter error, RMSEP and the coefficient of
/// variation at one `λ`. Needs `J >= 3` for the variance parameters.
pub fn gcc_msep(
    tri: &ClaimsTriangle,
    premiums: &PremiumVector,
    fit: &ClFit,
    lambda: f64,
) -> Result<MsepReport> {
    let input = GccInput::new(tri, premiums, &fit.pattern, lambda)?;
    let result = gcc_predict(&input);
    let process_var = gcc_process_var(&result, fit)?;
    let param_error = gcc_param_error(tri, premiums, fit, lambda)?;
    let msep = process_var + param_error;
    let rmsep = msep.sqrt();
    let reserves_total = result.reserves_total;
    let cova = if reserves_total > 0.0 {
        Some(rmsep / reserves_total)
    } else {
        None
    };
    Ok(MsepReport {
        lambda,
        process_var,
        param_error,
        msep,
        rmsep,
        reserves_total,
        cova,
    })
}

/// First-order approximation of the aggregate prediction shift when the
/// factors move from `true_factors` to `perturbed_factors`:
///
/// ```text
/// -( Σ_i Ĉ_i(λ) ) Σ_j (q_j(λ)/f_j) (f̂_j - f_j) ,
/// ```
///
/// everything evaluated at the true factors. Diagnostic companion to the
/// error-propagation derivation of `Δ²(λ)`.
pub fn taylor_delta(
    tri: &ClaimsTriangle,
    premiums: &PremiumVector,
    true_factors: &[f64],
    perturbed_factors: &[f64],
    lambda: f64,
) -> Result<f64> {
    if true_factors.len() != perturbed_factors.len() {
        return Err(Error::Shape(format!(
            "factor vectors have lengths {} and {}",
            true_factors.len(),
            perturbed_factors.len()
        )));
    }
    for (j, &f) in perturbed_factors.iter().enumerate() {
        if f <= 0.0 || f.is_nan() {
            return Err(Error::Domain(format!(
                "perturbed factor f_{j} = {f} must be strictly positive"
            )));
        }
    }
    let pattern = crate::chain_ladder::pattern_from_factors(true_factors)?;
    let input = GccInput::new(tri, premiums, &pattern, lambda)?;
    let total: f64 = gcc_predict(&input).ultimates.iter().sum();
    let q = q_sensitivities(tri, premiums, &pattern, lambda)?;
    let shift: f64 =
        q.q.iter()
            .zip(true_factors)
            .zip(perturbed_factors)
            .map(|((qj, f), fp)| qj / f * (fp - f))
            .sum();
    Ok(-total * shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain_ladder::{fit_cl_factors, pattern_from_factors};
    use crate::gcc::cc_claims_ratio;
    use crate::testdata;

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    fn wm_fixture() -> (ClaimsTriangle, PremiumVector, ClFit) {
        let tri = testdata::wm2008_triangle();
        let premiums = testdata::wm2008_premiums();
        let fit = ClFit::fit(&tri).unwrap();
        (tri, premiums, fit)
    }

    /// Specialized chain-ladder form: q_t(0) = Σ_{i≥I-t} Ĉ_i^CL / Σ_i Ĉ_i^CL.
    fn q_at_zero(tri: &ClaimsTriangle, factors: &[f64]) -> Vec<f64> {
        let ult = cl_predict(tri, factors).ultimates;
        let total: f64 = ult.iter().sum();
        (0..tri.dev_periods())
            .map(|t| ult[tri.dev_periods() - t..].iter().sum::<f64>() / total)
            .collect()
    }

    /// Specialized Cape Cod form:
    /// q_t(1) = (Σ_{k≥I-t} β π / Σ_k β π) · κ_CC Σ_i π_i / Σ_i Ĉ_i^CC.
    fn q_at_one(tri: &ClaimsTriangle, premiums: &PremiumVector, pattern: &[f64]) -> Vec<f64> {
        let years = tri.accident_years();
        let devs = tri.dev_periods();
        let cc = cc_claims_ratio(tri, premiums, pattern);
        let emerged: Vec<f64> = (0..years)
            .map(|k| pattern[tri.diagonal_dev(k)] * premiums.get(k))
            .collect();
        let emerged_total: f64 = emerged.iter().sum();
        let diag = tri.latest_diagonal();
        let cc_total: f64 = (0..years)
            .map(|i| diag[i] + (1.0 - pattern[tri.diagonal_dev(i)]) * cc * premiums.get(i))
            .sum();
        let premium_total: f64 = premiums.as_slice().iter().sum();
        (0..devs)
            .map(|t| {
                let head: f64 = emerged[devs - t..].iter().sum();
                head / emerged_total * cc * premium_total / cc_total
            })
            .collect()
    }

    #[test]
    fn boundary_forms_match_the_general_formula() {
        let (tri, premiums, fit) = wm_fixture();
        let q0 = q_sensitivities(&tri, &premiums, &fit.pattern, 0.0).unwrap();
        for (a, b) in q0.q.iter().zip(q_at_zero(&tri, &fit.factors)) {
            assert!(rel_err(*a, b) < 1e-12);
        }
        let q1 = q_sensitivities(&tri, &premiums, &fit.pattern, 1.0).unwrap();
        for (a, b) in q1.q.iter().zip(q_at_one(&tri, &premiums, &fit.pattern)) {
            assert!(rel_err(*a, b) < 1e-12);
        }
    }

    #[test]
    fn sensitivities_match_finite_differences_on_bundled_data() {
        let (tri, premiums, fit) = wm_fixture();
        let lambda = 0.5;
        let q = q_sensitivities(&tri, &premiums, &fit.pattern, lambda).unwrap();
        let step = 1e-6_f64;
        for t in 0..tri.dev_periods() {
            let aggregate = |factors: &[f64]| -> f64 {
                let pattern = pattern_from_factors(factors).unwrap();
                let input = GccInput::new(&tri, &premiums, &pattern, lambda).unwrap();
                gcc_predict(&input).ultimates.iter().sum()
            };
            let mut up = fit.factors.clone();
            up[t] *= step.exp();
            let mut down = fit.factors.clone();
            down[t] *= (-step).exp();
            let fd = (aggregate(&up).ln() - aggregate(&down).ln()) / (2.0 * step);
            assert!(rel_err(q.q[t], fd) < 1e-6, "t = {t}: {} vs {}", q.q[t], fd);
        }
    }

    #[test]
    fn mack_and_propagation_forms_agree_at_lambda_zero() {
        let (tri, premiums, fit) = wm_fixture();
        let mack = mack_param_error(&tri, &fit);
        let gcc0 = gcc_param_error(&tri, &premiums, &fit, 0.0).unwrap();
        assert!(rel_err(gcc0, mack) < 1e-10);
    }

    #[test]
    fn bundled_error_estimates_match_published_table() {
        let (tri, premiums, fit) = wm_fixture();
        for (lambda, expected_delta) in [(0.0, 185.0), (0.5, 166.0), (1.0, 156.0)] {
            let delta2 = gcc_param_error(&tri, &premiums, &fit, lambda).unwrap();
            assert_eq!(
                (delta2.sqrt() / 1e3).round(),
                expected_delta,
                "param error at lambda = {lambda}"
            );
        }
        for (lambda, expected_psi) in [(0.0, 424.0), (1.0, 434.0)] {
            let input = GccInput::new(&tri, &premiums, &fit.pattern, lambda).unwrap();
            let psi2 = gcc_process_var(&gcc_predict(&input), &fit).unwrap();
            assert_eq!(
                (psi2.sqrt() / 1e3).round(),
                expected_psi,
                "process error at lambda = {lambda}"
            );
        }
        assert_eq!((mack_param_error(&tri, &fit).sqrt() / 1e3).round(), 185.0);
    }

    #[test]
    fn process_variance_at_zero_is_macks() {
        // At λ=0 the fitted GCC values reduce to the chain-ladder fitted
        // values, so Ψ² must equal Mack's process variance computed from an
        // independent roll-forward.
        let (tri, premiums, fit) = wm_fixture();
        let input = GccInput::new(&tri, &premiums, &fit.pattern, 0.0).unwrap();
        let psi2 = gcc_process_var(&gcc_predict(&input), &fit).unwrap();

        let cl = cl_predict(&tri, &fit.factors);
        let mut mack = 0.0;
        for i in 0..tri.accident_years() {
            let mut inner = 0.0;
            for j in tri.diagonal_dev(i)..tri.dev_periods() {
                inner +=
                    fit.sigma2[j] / (fit.factors[j] * fit.factors[j]) / cl.fitted(i, j).unwrap();
            }
            mack += cl.ultimates[i] * cl.ultimates[i] * inner;
        }
        assert!(rel_err(psi2, mack) < 1e-12);
    }

    #[test]
    fn noiseless_triangle_has_zero_error_estimates() {
        let tri = ClaimsTriangle::from_rows(vec![
            vec![1.0, 2.0, 4.0, 8.0, 16.0],
            vec![3.0, 6.0, 12.0, 24.0],
            vec![5.0, 10.0, 20.0],
            vec![7.0, 14.0],
            vec![11.0],
        ])
        .unwrap();
        let premiums = PremiumVector::new(vec![20.0, 40.0, 60.0, 80.0, 100.0]).unwrap();
        let fit = ClFit::fit(&tri).unwrap();
        assert_eq!(fit.sigma2, vec![0.0; 4]);
        assert_eq!(mack_param_error(&tri, &fit), 0.0);
        for lambda in [0.0, 0.5, 1.0] {
            assert_eq!(gcc_param_error(&tri, &premiums, &fit, lambda).unwrap(), 0.0);
            let report = gcc_msep(&tri, &premiums, &fit, lambda).unwrap();
            assert_eq!(report.process_var, 0.0);
            assert_eq!(report.rmsep, 0.0);
        }
    }

    #[test]
    fn bundled_msep_reports_match_published_table() {
        let (tri, premiums, fit) = wm_fixture();
        for (lambda, rmsep, cova) in [(0.0, 463.0, 7.66), (0.55, 454.0, 7.48), (1.0, 461.0, 7.11)] {
            let report = gcc_msep(&tri, &premiums, &fit, lambda).unwrap();
            assert_eq!(
                (report.rmsep / 1e3).round(),
                rmsep,
                "rmsep at lambda = {lambda}"
            );
            let pct = (report.cova.unwrap() * 1e4).round() / 1e2;
            assert_eq!(pct, cova, "cova at lambda = {lambda}");
            assert_eq!(report.msep, report.process_var + report.param_error);
            assert!(rel_err(report.rmsep * report.rmsep, report.msep) < 1e-15);
        }
    }

    #[test]
    fn negative_reserves_leave_cova_undefined() {
        // Strictly decreasing development: factors below one, negative
        // reserves for every open year.
        let tri = ClaimsTriangle::from_rows(vec![
            vec![1000.0, 800.0, 700.0, 650.0, 640.0],
            vec![1100.0, 880.0, 770.0, 715.0],
            vec![900.0, 720.0, 630.0],
            vec![1000.0, 800.0],
            vec![950.0],
        ])
        .unwrap();
        let premiums = PremiumVector::new(vec![1.0e3; 5]).unwrap();
        let fit = ClFit::fit(&tri).unwrap();
        let report = gcc_msep(&tri, &premiums, &fit, 0.3).unwrap();
        assert!(report.reserves_total < 0.0);
        assert_eq!(report.cova, None);
        assert!(report.msep >= 0.0);
    }

    #[test]
    fn taylor_delta_vanishes_without_perturbation() {
        let (tri, premiums, fit) = wm_fixture();
        let delta = taylor_delta(&tri, &premiums, &fit.factors, &fit.factors, 0.4).unwrap();
        assert_eq!(delta, 0.0);
    }

    #[test]
    fn taylor_delta_at_zero_reduces_to_the_cl_formula() {
        let (tri, premiums, fit) = wm_fixture();
        let perturbed: Vec<f64> = fit
            .factors
            .iter()
            .enumerate()
            .map(|(j, f)| f * (1.0 + 1e-3 * (j as f64 + 1.0)))
            .collect();
        let delta = taylor_delta(&tri, &premiums, &fit.factors, &perturbed, 0.0).unwrap();
        let ult = cl_predict(&tri, &fit.factors).ultimates;
        let total: f64 = ult.iter().sum();
        let q0 = q_at_zero(&tri, &fit.factors);
        let expected: f64 = -total
            * q0.iter()
                .zip(&fit.factors)
                .zip(&perturbed)
                .map(|((q, f), fp)| q / f * (fp - f))
                .sum::<f64>();
        assert!(rel_err(delta, expected) < 1e-12);
    }

    proptest::proptest! {
        #[test]
        fn sensitivities_lie_in_the_unit_interval(
            seed in 0u64..60, years in 5usize..11, lambda in 0.0f64..=1.0
        ) {
            let (tri, premiums) = testdata::random_instance(seed, years);
            let factors = fit_cl_factors(&tri);
            // The bound is stated for non-decreasing patterns.
            proptest::prop_assume!(factors.iter().all(|f| *f >= 1.0));
            let pattern = pattern_from_factors(&factors).unwrap();
            let q = q_sensitivities(&tri, &premiums, &pattern, lambda).unwrap();
            for &qt in &q.q {
                proptest::prop_assert!(qt > 0.0 && qt <= 1.0 + 1e-12, "q = {}", qt);
            }
        }

        #[test]
        fn mack_equivalence_on_random_triangles(seed in 0u64..40, years in 5usize..11) {
            let (tri, premiums) = testdata::random_instance(seed, years);
            let fit = ClFit::fit(&tri).unwrap();
            let mack = mack_param_error(&tri, &fit);
            let gcc0 = gcc_param_error(&tri, &premiums, &fit, 0.0).unwrap();
            proptest::prop_assert!(rel_err(gcc0, mack) < 1e-10);
        }
    }
}
