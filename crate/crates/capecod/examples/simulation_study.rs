//! Monte Carlo calibration of the RMSEP estimator: simulate portfolios
//! under known development dynamics, refit everything per replication, and
//! compare the average estimated RMSEP against the empirical prediction
//! error of the aggregate ultimate.
//!
//! ```text
//! cargo run --release --example simulation_study [replications]
//! ```

use capecod::simulator::{default_ten_year_config, run_study};

fn main() {
    let replications: usize = std::env::args()
        .nth(1)
        .map(|arg| {
            arg.parse()
                .expect("replications must be a positive integer")
        })
        .unwrap_or(2000);

    let mut cfg = default_ten_year_config();
    cfg.replications = replications;
    println!(
        "simulating {replications} ten-year portfolios ({} increments, seed {})\n",
        cfg.distribution.tag(),
        cfg.seed
    );

    let study = run_study(&cfg, &[0.0, 0.25, 0.5, 0.75, 1.0]).unwrap();
    println!(
        "{:>7}  {:>14}  {:>14}  {:>14}  {:>6}",
        "lambda", "mean reserves", "empirical RMSE", "mean est. RMSEP", "ratio"
    );
    for c in &study.calibration {
        println!(
            "{:>7}  {:>14.0}  {:>14.0}  {:>14.0}  {:>6.2}",
            c.lambda,
            c.mean_reserves,
            c.empirical_rmse,
            c.mean_estimated_rmsep,
            c.mean_estimated_rmsep / c.empirical_rmse
        );
    }
    println!(
        "\n{} redraws out of {} replications; a ratio near 1 means the estimator \
         tracks the realized prediction error",
        study.redraws, study.replications
    );
}
