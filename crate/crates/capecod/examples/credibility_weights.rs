//! The credibility structure behind the generalized Cape Cod predictor:
//! pooling weights α, credibility weights ω reconstructing the predictor
//! from chain-ladder ultimates, and the two-term split of each blended
//! claims ratio into own experience and pooled experience.
//!
//! ```text
//! cargo run --example credibility_weights
//! ```

use capecod::chain_ladder::{cl_predict, ClFit};
use capecod::gcc::{credibility_decomposition, gcc_predict, omega_weights, GccInput};

fn main() {
    let tri = capecod::dataset::wm2008_triangle();
    let premiums = capecod::dataset::wm2008_premiums();
    let fit = ClFit::fit(&tri).unwrap();
    let lambda = 0.5;
    let input = GccInput::new(&tri, &premiums, &fit.pattern, lambda).unwrap();

    let omega = omega_weights(&input);
    let years = tri.accident_years();
    println!("credibility weights ω[i][l] at λ = {lambda} (rows sum to 1):\n");
    print!("{:>6}", "year");
    for l in 0..years {
        print!("  {:>5}", l + 1);
    }
    println!();
    for (i, row) in omega.iter().enumerate() {
        print!("{:>6}", i + 1);
        for w in row {
            print!("  {w:>5.3}");
        }
        println!();
    }

    // The ω weights rebuild the GCC predictor from chain-ladder ultimates,
    // each adjusted to the target year's premium level.
    let cl = cl_predict(&tri, &fit.factors).ultimates;
    let result = gcc_predict(&input);
    let year = years - 1; // the greenest year leans most on the others
    let rebuilt: f64 = (0..years)
        .map(|l| {
            let adj = if l == year {
                1.0
            } else {
                premiums.get(year) / premiums.get(l)
            };
            omega[year][l] * adj * cl[l]
        })
        .sum();
    println!(
        "\nyear {} predictor rebuilt from chain-ladder ultimates: {rebuilt:.0} \
         (direct: {:.0})",
        year + 1,
        result.ultimates[year]
    );

    println!(
        "\ncredibility split of the blended ratio for year {}:",
        year + 1
    );
    println!("{:>8}  {:>10}  {:>10}", "lambda", "own weight", "pooled");
    for lambda in [0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0] {
        let input = GccInput::new(&tri, &premiums, &fit.pattern, lambda).unwrap();
        let split = credibility_decomposition(&input, year);
        match split.pooled {
            Some(pooled) => {
                println!("{lambda:>8}  {:>10.4}  {pooled:>10.4}", split.own_weight)
            }
            None => println!("{lambda:>8}  {:>10.4}  {:>10}", split.own_weight, "-"),
        }
    }
}
