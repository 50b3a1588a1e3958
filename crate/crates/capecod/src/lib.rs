//! Claims reserving with the chain-ladder, Cape Cod and generalized Cape Cod
//! methods, including closed-form prediction uncertainty (mean squared error
//! of prediction) for all of them.
//!
//! The generalized Cape Cod (GCC) method blends the accident-year claims
//! ratios with exponential distance weights `λ^|i-l|`, `λ ∈ [0, 1]`. It
//! interpolates continuously between the chain-ladder method (`λ = 0`) and
//! Bühlmann's Cape Cod method (`λ = 1`), using chain-ladder-implied
//! development patterns throughout. Prediction uncertainty is estimated by
//! first-order error propagation in the chain-ladder factors; at `λ = 0`
//! this reproduces Mack's classical formula.
//!
//! ## Modules
//!
//! - [`triangle`] — run-off triangles, premium vectors, CSV ingestion
//! - [`chain_ladder`] — development factors, variance parameters, pattern,
//!   chain-ladder predictors
//! - [`gcc`] — Cape Cod / generalized Cape Cod claims ratios, predictors,
//!   reserves and their credibility reformulations
//! - [`uncertainty`] — factor sensitivities, process variance, parameter
//!   estimation error, RMSEP and coefficient of variation
//! - [`simulator`] — Monte Carlo generation of synthetic triangles for
//!   empirical validation of the estimators
//! - [`report`] — λ-sweep report document with CSV/JSON emission
//! - [`cli`] — implementations behind the `capecod` command-line tool
//! - [`dataset`] — the bundled 10-year example portfolio
//!
//! ## Examples
//!
//! Each major capability has a runnable example:
//!
//! ```text
//! cargo run --example fit_chain_ladder    # factors, sigma^2, pattern, claims ratios
//! cargo run --example gcc_reserves       # reserves at a chosen lambda vs CL and CC
//! cargo run --example credibility_weights # alpha/omega weights and the credibility split
//! cargo run --example lambda_sweep       # reserves and RMSEP across the lambda grid
//! cargo run --example sensitivity_check  # closed-form q_t vs finite differences
//! cargo run --example simulation_study   # Monte Carlo calibration of the RMSEP estimator
//! ```

pub mod chain_ladder;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod gcc;
pub mod report;
pub mod simulator;
pub mod triangle;
pub mod uncertainty;

pub use chain_ladder::{ClFit, ClPrediction};
pub use error::{Error, Result};
pub use gcc::{GccInput, GccResult};
pub use triangle::{ClaimsTriangle, IncrementalTriangle, PremiumVector};
pub use uncertainty::MsepReport;
