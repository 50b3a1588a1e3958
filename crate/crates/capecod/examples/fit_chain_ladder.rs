//! Fit the chain-ladder model on the bundled portfolio: development
//! factors, variance parameters, development pattern, and the implied
//! claims ratios.
//!
//! ```text
//! cargo run --example fit_chain_ladder
//! ```

use capecod::chain_ladder::{cl_predict, ClFit};
use capecod::gcc::{cc_claims_ratio, individual_claims_ratios};

fn main() {
    let tri = capecod::dataset::wm2008_triangle();
    let premiums = capecod::dataset::wm2008_premiums();
    let fit = ClFit::fit(&tri).expect("bundled triangle is large enough");

    println!("development period j: factor f_j, variance sigma2_j, pattern beta_j");
    for j in 0..tri.dev_periods() {
        println!(
            "  j = {j}: f = {:.6}  sigma2 = {:>12.3}  beta = {:.6}",
            fit.factors[j], fit.sigma2[j], fit.pattern[j]
        );
    }
    println!(
        "  j = {}: (no factor)              beta = {}",
        tri.dev_periods(),
        fit.pattern[tri.dev_periods()]
    );

    let prediction = cl_predict(&tri, &fit.factors);
    let (reserves, total) = prediction.reserves(&tri);
    println!("\naccident year: latest diagonal, ultimate, reserve");
    let diag = tri.latest_diagonal();
    for i in 0..tri.accident_years() {
        println!(
            "  year {:>2}: {:>12.0}  {:>12.0}  {:>11.0}",
            i + 1,
            diag[i],
            prediction.ultimates[i],
            reserves[i]
        );
    }
    println!("  total chain-ladder reserves: {total:.0}");

    let kappas = individual_claims_ratios(&tri, &premiums, &fit.pattern);
    let cc = cc_claims_ratio(&tri, &premiums, &fit.pattern);
    println!("\nindividual claims ratios (ultimate per unit premium):");
    for (i, kappa) in kappas.iter().enumerate() {
        println!("  year {:>2}: {kappa:.4}", i + 1);
    }
    println!("pooled Cape Cod claims ratio: {cc:.4}");
}
