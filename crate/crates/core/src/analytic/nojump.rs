//! Closed-form no-click evolution under the adaptive oscillator.
//!
//! Substituting `|alpha|^2 = mu gamma / (1-mu) * rho_ee / rho_gg` into the
//! anticommutator equation for the un-normalized density gives
//!
//! ```text
//! rho_gg(t) = pi_g exp(-k (1 - exp(-gamma t)))
//! rho_ee(t) = pi_e exp(-k (1 - exp(-gamma t))) exp(-gamma t)
//! rho_ge(t) = sqrt(pi_e pi_g) exp(-k (1 - exp(-gamma t))) exp(-gamma t / 2)
//! ```
//!
//! with `k = mu/(1-mu) * pi_e/pi_g`.

use num_complex::Complex64;

use crate::detection::b_jump_population_map;
use crate::state::{Params, UnnormalizedDensity};

/// Recurring constants of the closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormConstants {
    /// `mu/(1-mu) * pi_e/pi_g`, the total no-click exponent.
    pub k: f64,
    /// `mu^5/(1-mu) * pi_e^3/pi_g^2 * exp(-k)`.
    pub a0: f64,
    /// `(mu + mu^2) pi_e/pi_g`.
    pub a1: f64,
    /// `mu^3/(1-mu) * pi_e/pi_g`.
    pub a2: f64,
}

impl ClosedFormConstants {
    pub fn new(p: &Params) -> Self {
        let mu = p.mu();
        let ratio = p.pi_e() / p.pi_g();
        let k = mu / (1.0 - mu) * ratio;
        Self {
            k,
            a0: mu.powi(5) / (1.0 - mu) * p.pi_e().powi(3) / p.pi_g().powi(2) * (-k).exp(),
            a1: (mu + mu * mu) * ratio,
            a2: mu.powi(3) / (1.0 - mu) * ratio,
        }
    }
}

/// `k` for the given parameters.
pub fn exponent(p: &Params) -> f64 {
    p.mu() / (1.0 - p.mu()) * p.pi_e() / p.pi_g()
}

/// `exp(-k (1 - exp(-gamma t)))`.
fn envelope(t: f64, p: &Params) -> f64 {
    (exponent(p) * (-p.gamma() * t).exp_m1()).exp()
}

pub fn nojump_density(t: f64, p: &Params) -> UnnormalizedDensity {
    let env = envelope(t, p);
    let decay = (-p.gamma() * t).exp();
    UnnormalizedDensity {
        rho_gg: p.pi_g() * env,
        rho_ee: p.pi_e() * env * decay,
        rho_ge: Complex64::new((p.pi_e() * p.pi_g()).sqrt() * env * (-0.5 * p.gamma() * t).exp(), 0.0),
    }
}

/// Absolute residual of `rho_gg'' = rho_gg'^2 / rho_gg - gamma rho_gg'`
/// evaluated on the closed form with analytic derivatives.
pub fn nojump_ode_residual(t: f64, p: &Params) -> f64 {
    let gamma = p.gamma();
    let k = exponent(p);
    let decay = (-gamma * t).exp();
    // rho_gg = pi_g exp(f),  f' = -k gamma e^{-gamma t},  f'' = k gamma^2 e^{-gamma t}
    let f1 = -k * gamma * decay;
    let f2 = k * gamma * gamma * decay;
    let rho = nojump_density(t, p).rho_gg;
    let d1 = rho * f1;
    let d2 = rho * (f2 + f1 * f1);
    (d2 - d1 * d1 / rho + gamma * d1).abs()
}

/// Probability that no click at all has happened up to `t`.
pub fn p0_of_t(t: f64, p: &Params) -> f64 {
    nojump_density(t, p).trace()
}

/// Probability that no click ever happens.
pub fn p0(p: &Params) -> f64 {
    p.pi_g() * (-exponent(p)).exp()
}

/// Excited population conditioned on no click under plain photon counting.
pub fn counting_conditional_population(t: f64, p: &Params) -> f64 {
    let decayed = p.pi_e() * (-p.gamma() * t).exp();
    decayed / (p.pi_g() + decayed)
}

/// Probability density of the first click being in detector A at `t`:
/// `mu gamma rho_ee^2 / rho_gg`.
pub fn a_jump_density(t: f64, p: &Params) -> f64 {
    let rho = nojump_density(t, p);
    if rho.rho_ee == 0.0 {
        return 0.0;
    }
    p.mu() * p.gamma() * rho.rho_ee * rho.rho_ee / rho.rho_gg
}

/// Probability density of the first click being in detector B at `t`:
/// `gamma/(1-mu) rho_ee (1 + mu^2 rho_ee / rho_gg)`.
pub fn b_jump_density(t: f64, p: &Params) -> f64 {
    let rho = nojump_density(t, p);
    if rho.rho_ee == 0.0 {
        return 0.0;
    }
    let mu = p.mu();
    p.gamma() / (1.0 - mu) * rho.rho_ee * (1.0 + mu * mu * rho.rho_ee / rho.rho_gg)
}

/// Parameters of the next no-click epoch after a B click at `t_b`.
///
/// The post-click state is again a real superposition, so the closed forms
/// reapply with `pi_e` replaced by the post-click population.
pub fn post_b_rebase(t_b: f64, p: &Params) -> Params {
    let x = counting_conditional_population(t_b, p);
    p.with_pi_e(b_jump_population_map(x, p.mu()))
        .expect("contraction keeps the population below one")
}
