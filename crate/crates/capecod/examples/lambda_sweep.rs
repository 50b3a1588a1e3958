//! Reserves and prediction uncertainty across the whole decay-factor grid:
//! the λ-profile of reserves, the process/parameter error split, and the
//! location of the minimal RMSEP.
//!
//! ```text
//! cargo run --example lambda_sweep
//! ```

use capecod::report::{lambda_grid, ReportDocument, ReportMetadata};

fn main() {
    let tri = capecod::dataset::wm2008_triangle();
    let premiums = capecod::dataset::wm2008_premiums();
    let grid = lambda_grid(0.05).unwrap();
    let doc = ReportDocument::build(&tri, &premiums, &grid, ReportMetadata::default()).unwrap();

    // Same layout as the usual reserving summary, in thousands.
    println!("{}", doc.to_text(1e3));

    let best = doc.min_rmsep_record();
    println!(
        "minimal RMSEP on the grid: {:.0} at λ = {} (reserves {:.0})",
        best.rmsep, best.lambda, best.reserves_total
    );

    // The elasticities q_t(λ) behind the parameter error, at the minimum.
    let idx = doc
        .lambda_grid
        .iter()
        .position(|l| *l == best.lambda)
        .unwrap();
    println!("\nfactor sensitivities q_t at λ = {}:", best.lambda);
    for (t, q) in doc.q[idx].iter().enumerate() {
        println!("  t = {t}: {q:.4}");
    }
}
