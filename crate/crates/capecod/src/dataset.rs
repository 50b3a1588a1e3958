//! Bundled example portfolio: 10 accident years of cumulative claims
//! payments with earned premiums, transcribed from Wüthrich–Merz,
//! *Stochastic Claims Reserving Methods in Insurance* (Wiley, 2008),
//! Tables 2.2 and 4.3. See `data/README.md` for the provenance note.

use crate::triangle::{ClaimsTriangle, PremiumVector};

const TRIANGLE_CSV: &str = include_str!("../data/wm2008_triangle.csv");
const PREMIUMS_CSV: &str = include_str!("../data/wm2008_premiums.csv");

/// The bundled 10-year claims payment triangle.
pub fn wm2008_triangle() -> ClaimsTriangle {
    ClaimsTriangle::parse_csv(TRIANGLE_CSV).expect("bundled triangle is valid")
}

/// Earned premiums matching [`wm2008_triangle`].
pub fn wm2008_premiums() -> PremiumVector {
    PremiumVector::parse_csv(PREMIUMS_CSV).expect("bundled premiums are valid")
}
