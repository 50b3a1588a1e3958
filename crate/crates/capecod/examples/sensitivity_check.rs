//! Cross-check the closed-form factor sensitivities against central finite
//! differences of the aggregate predictor, one log-factor at a time.
//!
//! ```text
//! cargo run --example sensitivity_check
//! ```

use capecod::chain_ladder::{pattern_from_factors, ClFit};
use capecod::gcc::{gcc_predict, GccInput};
use capecod::triangle::{ClaimsTriangle, PremiumVector};
use capecod::uncertainty::q_sensitivities;

/// Aggregate GCC predictor as a function of the factors: rebuild the
/// pattern, the blended ratios and the predictor from scratch.
fn aggregate(tri: &ClaimsTriangle, premiums: &PremiumVector, factors: &[f64], lambda: f64) -> f64 {
    let pattern = pattern_from_factors(factors).unwrap();
    let input = GccInput::new(tri, premiums, &pattern, lambda).unwrap();
    gcc_predict(&input).ultimates.iter().sum()
}

fn main() {
    let tri = capecod::dataset::wm2008_triangle();
    let premiums = capecod::dataset::wm2008_premiums();
    let fit = ClFit::fit(&tri).unwrap();
    let step = 1e-6_f64;

    for lambda in [0.0, 0.5, 1.0] {
        let q = q_sensitivities(&tri, &premiums, &fit.pattern, lambda).unwrap();
        println!("λ = {lambda}: closed form vs central difference (rel. step {step:e})");
        let mut worst: f64 = 0.0;
        for t in 0..tri.dev_periods() {
            let mut up = fit.factors.clone();
            up[t] *= step.exp();
            let mut down = fit.factors.clone();
            down[t] *= (-step).exp();
            let fd = (aggregate(&tri, &premiums, &up, lambda).ln()
                - aggregate(&tri, &premiums, &down, lambda).ln())
                / (2.0 * step);
            let rel = (q.q[t] - fd).abs() / fd.abs();
            worst = worst.max(rel);
            println!(
                "  t = {t}: q = {:.10}  fd = {fd:.10}  rel err = {rel:.2e}",
                q.q[t]
            );
        }
        println!("  worst relative error: {worst:.2e}\n");
    }
}
