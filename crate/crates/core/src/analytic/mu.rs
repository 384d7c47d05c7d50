//! Choice of beam-splitter transmission that maximizes the heralding
//! probability `P_A` for a given initial excitation.

use super::closed_form::p_a_closed_form;
use super::sequences::p_a;
use crate::error::{check_domain, Result};
use crate::optimize::{brent_maximize, grid_maximize};
use crate::state::Params;

/// Transmission range searched by the optimizer.
pub const MU_RANGE: (f64, f64) = (1e-4, 1.0 - 1e-4);
/// Abscissa tolerance of the bracketed maximizer.
pub const MU_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuOptimum {
    pub pi_e: f64,
    pub mu_star: f64,
    pub p_a_star: f64,
}

fn objective(pi_e: f64, mu: f64, closed: bool) -> f64 {
    let p = Params::unit(mu, pi_e).expect("mu inside the search range");
    if closed {
        p_a_closed_form(&p)
    } else {
        p_a(&p)
    }
}

fn check_pi_e(pi_e: f64) -> Result<()> {
    check_domain("pi_e", pi_e, pi_e > 0.0 && pi_e < 1.0, "0 < pi_e < 1")
}

/// Maximizes the quadrature value of `P_A` over `mu` with Brent's method.
pub fn optimize_mu(pi_e: f64) -> Result<MuOptimum> {
    check_pi_e(pi_e)?;
    let best = brent_maximize(|mu| objective(pi_e, mu, false), MU_RANGE.0, MU_RANGE.1, MU_TOLERANCE);
    Ok(MuOptimum {
        pi_e,
        mu_star: best.x,
        p_a_star: best.value,
    })
}

/// Brute-force scan of the closed-form `P_A` on `n_points` values of `mu`.
pub fn scan_mu(pi_e: f64, n_points: usize) -> Result<MuOptimum> {
    check_pi_e(pi_e)?;
    let best = grid_maximize(|mu| objective(pi_e, mu, true), MU_RANGE.0, MU_RANGE.1, n_points);
    Ok(MuOptimum {
        pi_e,
        mu_star: best.x,
        p_a_star: best.value,
    })
}

/// Spacing of an `n_points` scan over [`MU_RANGE`].
pub fn scan_spacing(n_points: usize) -> f64 {
    (MU_RANGE.1 - MU_RANGE.0) / (n_points - 1) as f64
}
