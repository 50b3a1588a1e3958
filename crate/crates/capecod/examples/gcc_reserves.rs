//! Generalized Cape Cod reserves at a chosen decay factor, next to the two
//! boundary methods: chain-ladder (λ = 0) and Cape Cod (λ = 1).
//!
//! ```text
//! cargo run --example gcc_reserves [lambda]
//! ```

use capecod::chain_ladder::ClFit;
use capecod::gcc::{gcc_predict, gcc_reserves, GccInput};

fn main() {
    let lambda: f64 = std::env::args()
        .nth(1)
        .map(|arg| arg.parse().expect("lambda must be a number"))
        .unwrap_or(0.5);

    let tri = capecod::dataset::wm2008_triangle();
    let premiums = capecod::dataset::wm2008_premiums();
    let fit = ClFit::fit(&tri).unwrap();

    let mut columns = Vec::new();
    for l in [0.0, lambda, 1.0] {
        let input = GccInput::new(&tri, &premiums, &fit.pattern, l).expect("lambda in [0, 1]");
        let result = gcc_predict(&input);
        let (per_year, total) = gcc_reserves(&result, &tri);
        columns.push((l, per_year, total));
    }

    println!("reserves per accident year: chain-ladder (λ=0), GCC (λ={lambda}), Cape Cod (λ=1)\n");
    println!(
        "{:>6}  {:>12}  {:>12}  {:>12}",
        "year",
        "λ=0",
        format!("λ={lambda}"),
        "λ=1"
    );
    for i in 0..tri.accident_years() {
        println!(
            "{:>6}  {:>12.0}  {:>12.0}  {:>12.0}",
            i + 1,
            columns[0].1[i],
            columns[1].1[i],
            columns[2].1[i]
        );
    }
    println!(
        "{:>6}  {:>12.0}  {:>12.0}  {:>12.0}",
        "total", columns[0].2, columns[1].2, columns[2].2
    );

    println!("\nblended claims ratios at λ = {lambda}:");
    let input = GccInput::new(&tri, &premiums, &fit.pattern, lambda).unwrap();
    let result = gcc_predict(&input);
    for i in 0..tri.accident_years() {
        println!(
            "  year {:>2}: individual {:.4} -> blended {:.4}",
            i + 1,
            result.individual_ratios[i],
            result.gcc_ratios[i]
        );
    }
}
