//! Closed-form expressions for `P_A` and `P_BA`, both re-derived and as
//! previously printed, with a side-by-side comparison against
//! quadrature.
//!
//! Substituting `u = exp(-gamma t)` turns both integrals into combinations
//! of `J(c) = int_0^1 u exp(-c (1 - u)) du = ((c - 1) + exp(-c)) / c^2`:
//!
//! ```text
//! P_A  = mu pi_e^2 / pi_g * J(k)
//! P_BA = mu^5/(1-mu) * pi_e^3/pi_g^2 / a1 * (J(a2) - J(a1 + a2))
//! ```
//!
//! where `a1 + a2 = k`.

use super::nojump::ClosedFormConstants;
use super::sequences::{p_a, p_sequence, EventSequence};
use crate::state::Params;

/// `int_0^1 u exp(-c (1 - u)) du`, accurate for all `c >= 0`.
pub fn j_integral(c: f64) -> f64 {
    if c < 0.1 {
        // sum_n (-c)^n / (n! (n+1) (n+2))
        let mut term = 1.0;
        let mut sum = 0.0;
        for n in 0..16 {
            let nf = n as f64;
            if n > 0 {
                term *= -c / nf;
            }
            sum += term / ((nf + 1.0) * (nf + 2.0));
        }
        sum
    } else {
        ((c - 1.0) + (-c).exp()) / (c * c)
    }
}

/// Re-derived closed form of `P_A`.
pub fn p_a_closed_form(p: &Params) -> f64 {
    if p.pi_e() == 0.0 {
        return 0.0;
    }
    let c = ClosedFormConstants::new(p);
    p.mu() * p.pi_e() * p.pi_e() / p.pi_g() * j_integral(c.k)
}

/// Re-derived closed form of `P_BA`.
pub fn p_ba_closed_form(p: &Params) -> f64 {
    if p.pi_e() == 0.0 {
        return 0.0;
    }
    let mu = p.mu();
    let c = ClosedFormConstants::new(p);
    let prefactor = mu.powi(5) / (1.0 - mu) * p.pi_e().powi(3) / p.pi_g().powi(2);
    prefactor / c.a1 * (j_integral(c.a2) - j_integral(c.a1 + c.a2))
}

/// How the symbol `A` in the printed `P_A` expression is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrintedReading {
    /// `A = exp(mu/(1-mu) pi_e/pi_g)`, exactly as defined next to the formula.
    Literal,
    /// `A = mu/(1-mu) pi_e/pi_g`, i.e. without the outer exponential.
    ExponentOnly,
}

/// `mu pi_e^2/pi_g (exp(A)/A^2 + (1 - exp(A))/A^3)` as printed.
pub fn p_a_printed(p: &Params, reading: PrintedReading) -> f64 {
    let k = ClosedFormConstants::new(p).k;
    let a = match reading {
        PrintedReading::Literal => k.exp(),
        PrintedReading::ExponentOnly => k,
    };
    let ea = a.exp();
    p.mu() * p.pi_e() * p.pi_e() / p.pi_g() * (ea / (a * a) + (1.0 - ea) / (a * a * a))
}

/// The printed `P_BA` closed form, with its `exp(a2)` prefactor on the first
/// bracket.
pub fn p_ba_printed(p: &Params) -> f64 {
    let c = ClosedFormConstants::new(p);
    let bracket = |x: f64| (1.0 - x.exp()) / (x * x) + x.exp() / x;
    let s = c.a1 + c.a2;
    c.a0 / c.a1 * (c.a2.exp() * bracket(c.a2) - bracket(s))
}

/// Quadrature next to the closed forms for one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormReport {
    pub pi_e: f64,
    pub mu: f64,
    pub quadrature: f64,
    pub rederived: f64,
    pub printed: f64,
    /// Second reading of the printed form, where one exists.
    pub printed_alternative: Option<f64>,
}

impl ClosedFormReport {
    pub fn rederived_error(&self) -> f64 {
        (self.rederived - self.quadrature).abs()
    }

    /// Relative deviation of the printed form from quadrature (may be
    /// infinite or NaN when the printed form overflows).
    pub fn printed_relative_error(&self) -> f64 {
        (self.printed - self.quadrature).abs() / self.quadrature.abs()
    }

    pub fn alternative_relative_error(&self) -> Option<f64> {
        self.printed_alternative
            .map(|v| (v - self.quadrature).abs() / self.quadrature.abs())
    }
}

pub fn compare_p_a(p: &Params) -> ClosedFormReport {
    ClosedFormReport {
        pi_e: p.pi_e(),
        mu: p.mu(),
        quadrature: p_a(p),
        rederived: p_a_closed_form(p),
        printed: p_a_printed(p, PrintedReading::Literal),
        printed_alternative: Some(p_a_printed(p, PrintedReading::ExponentOnly)),
    }
}

pub fn compare_p_ba(p: &Params) -> ClosedFormReport {
    ClosedFormReport {
        pi_e: p.pi_e(),
        mu: p.mu(),
        quadrature: p_sequence(&EventSequence::excited(1), p),
        rederived: p_ba_closed_form(p),
        printed: p_ba_printed(p),
        printed_alternative: None,
    }
}
