//! Measurement back action of the beam-splitter detection setup.
//!
//! The emitter field and a coherent local oscillator of amplitude `alpha`
//! are mixed on a beam splitter of intensity transmission `mu`. A click in
//! output port A or B applies
//!
//! ```text
//! C_A = sqrt(1-mu) a_LO + sqrt(mu) sqrt(gamma) |g><e|
//! C_B = sqrt(mu)   a_LO - sqrt(1-mu) sqrt(gamma) |g><e|
//! ```
//!
//! to the emitter. The oscillator is an undepleted coherent state, so
//! `a_LO` acts as the scalar `alpha` and no field Hilbert space is kept.
//! Photon counting is the special case `alpha = 0`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{Detector, EmitterState, Params};

/// Below this ground population the adaptive oscillator amplitude is
/// reported as divergent.
pub const ADAPTIVE_ALPHA_FLOOR: f64 = 1e-12;

/// Click rates of the two detectors, in units of `gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePair {
    pub rate_a: f64,
    pub rate_b: f64,
}

impl RatePair {
    pub fn total(&self) -> f64 {
        self.rate_a + self.rate_b
    }

    pub fn get(&self, detector: Detector) -> f64 {
        match detector {
            Detector::A => self.rate_a,
            Detector::B => self.rate_b,
        }
    }
}

/// Record of one applied click.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpOutcome {
    pub detector: Detector,
    pub pre_population: f64,
    pub post_population: f64,
    /// Squared norm of the un-normalized post-click state (the click rate).
    pub weight: f64,
}

/// `(ground, excited)` port coefficients `(c_lo, c_emitter)` of the jump
/// operator for `detector`.
fn port_coefficients(detector: Detector, p: &Params) -> (f64, f64) {
    let mu = p.mu();
    let sqrt_gamma = p.gamma().sqrt();
    match detector {
        Detector::A => ((1.0 - mu).sqrt(), mu.sqrt() * sqrt_gamma),
        Detector::B => (mu.sqrt(), -(1.0 - mu).sqrt() * sqrt_gamma),
    }
}

/// Un-normalized state `C_detector |psi>`.
pub fn jump_amplitudes(
    s: &EmitterState,
    detector: Detector,
    alpha: Complex64,
    p: &Params,
) -> EmitterState {
    let (c_lo, c_em) = port_coefficients(detector, p);
    EmitterState::new(c_lo * alpha * s.a + c_em * s.b, c_lo * alpha * s.b)
}

pub fn rates(s: &EmitterState, alpha: Complex64, p: &Params) -> RatePair {
    RatePair {
        rate_a: jump_amplitudes(s, Detector::A, alpha, p).norm_sqr(),
        rate_b: jump_amplitudes(s, Detector::B, alpha, p).norm_sqr(),
    }
}

/// Applies a click on `detector` and returns the normalized post-click state.
pub fn apply_jump(
    s: &EmitterState,
    detector: Detector,
    alpha: Complex64,
    p: &Params,
) -> Result<(JumpOutcome, EmitterState)> {
    let raw = jump_amplitudes(s, detector, alpha, p);
    let (post, weight) = raw
        .normalize()
        .map_err(|_| Error::ZeroRateJump(detector))?;
    let outcome = JumpOutcome {
        detector,
        pre_population: s.excited_population(),
        post_population: post.excited_population(),
        weight,
    };
    Ok((outcome, post))
}

/// Oscillator amplitude that cancels the ground-state component of
/// `C_A |psi>`, so that an A click leaves the emitter fully excited.
pub fn adaptive_alpha(s: &EmitterState, p: &Params) -> Result<Complex64> {
    let ground = s.ground_population();
    if ground < ADAPTIVE_ALPHA_FLOOR {
        return Err(Error::AlphaDivergence(ground));
    }
    let mu = p.mu();
    let scale = -(p.gamma() * mu / (1.0 - mu)).sqrt();
    Ok(scale * s.b / s.a)
}

/// Exact no-click evolution over `dt` with `alpha` held fixed.
///
/// The summed operator `C_A^+ C_A + C_B^+ C_B` is `|alpha|^2 + gamma |e><e|`
/// on the emitter, so the un-normalized amplitudes are
/// `a exp(-|alpha|^2 dt/2)` and `b exp(-(|alpha|^2 + gamma) dt/2)`. The common
/// oscillator factor drops out of the normalized state and only enters the
/// returned survival probability.
pub fn no_jump_step(
    s: &EmitterState,
    alpha: Complex64,
    p: &Params,
    dt: f64,
) -> (EmitterState, f64) {
    let excited_factor = (-0.5 * p.gamma() * dt).exp();
    let raw = EmitterState::new(s.a, s.b * excited_factor);
    let relative = raw.norm_sqr();
    let survival = (-alpha.norm_sqr() * dt).exp() * relative;
    let inv = relative.sqrt().recip();
    (EmitterState::new(raw.a * inv, raw.b * inv), survival)
}

/// Excited population right after a B click under the adaptive oscillator,
/// as a function of the population `x` right before it.
pub fn b_jump_population_map(x: f64, mu: f64) -> f64 {
    let m2x = mu * mu * x;
    m2x / (1.0 - x + m2x)
}
