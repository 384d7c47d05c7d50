//! Probabilities of complete detection records under the adaptive scheme:
//! `m` B clicks followed by silence (`B^m 0`) or `n` B clicks followed by the
//! heralding A click (`B^n A`).
//!
//! Each B click restarts the no-click epoch from the contracted population,
//! so a sequence probability is a nested integral over the B click times
//! whose innermost factor is `P_0` or `P_A` of the last epoch.

use std::fmt;
use std::str::FromStr;

use super::nojump::{a_jump_density, b_jump_density, p0, post_b_rebase};
use crate::error::Error;
use crate::quadrature::{integrate_half_line, Tolerance};
use crate::state::Params;

/// Absolute tolerance of the innermost `P_A` quadrature.
pub const P_A_TOLERANCE: f64 = 1e-10;
/// Absolute tolerance of each outer B-time quadrature.
pub const SEQUENCE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ending {
    /// No further click; the emitter decays unobserved into the ground state.
    Ground,
    /// A click in detector A heralds the excited state.
    Excited,
}

/// `B^b_jumps` followed by `ending`, with at most two B clicks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EventSequence {
    b_jumps: usize,
    ending: Ending,
}

impl EventSequence {
    pub const MAX_B_JUMPS: usize = 2;

    pub fn new(b_jumps: usize, ending: Ending) -> Result<Self, Error> {
        if b_jumps > Self::MAX_B_JUMPS {
            return Err(Error::UnsupportedSequence(
                Self { b_jumps, ending }.label(),
            ));
        }
        Ok(Self { b_jumps, ending })
    }

    /// `B^m 0`. Panics for `m > 2`.
    pub fn ground(m: usize) -> Self {
        Self::new(m, Ending::Ground).expect("at most two B clicks")
    }

    /// `B^n A`. Panics for `n > 2`.
    pub fn excited(n: usize) -> Self {
        Self::new(n, Ending::Excited).expect("at most two B clicks")
    }

    pub fn b_jumps(&self) -> usize {
        self.b_jumps
    }

    pub fn ending(&self) -> Ending {
        self.ending
    }

    /// Compact label: `"0"`, `"A"`, `"B0"`, `"BA"`, `"BB0"`, `"BBA"`.
    pub fn label(&self) -> String {
        let mut s = "B".repeat(self.b_jumps);
        s.push(match self.ending {
            Ending::Ground => '0',
            Ending::Excited => 'A',
        });
        s
    }

    pub fn all() -> impl Iterator<Item = Self> {
        (0..=Self::MAX_B_JUMPS)
            .flat_map(|n| [Self::ground(n), Self::excited(n)])
    }
}

impl fmt::Display for EventSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for EventSequence {
    type Err = Error;

    /// Accepts compact labels (`"BBA"`) and exponent notation (`"B^2 A"`,
    /// `"B^1 0"`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unsupported = || Error::UnsupportedSequence(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (head, last) = compact
            .char_indices()
            .last()
            .map(|(i, c)| (&compact[..i], c))
            .ok_or_else(unsupported)?;
        let ending = match last {
            '0' => Ending::Ground,
            'A' | 'a' => Ending::Excited,
            _ => return Err(unsupported()),
        };
        let b_jumps = if let Some(exp) = head.strip_prefix("B^").or_else(|| head.strip_prefix("b^")) {
            exp.parse::<usize>().map_err(|_| unsupported())?
        } else if head.chars().all(|c| c == 'B' || c == 'b') {
            head.len()
        } else {
            return Err(unsupported());
        };
        Self::new(b_jumps, ending).map_err(|_| unsupported())
    }
}

/// `P_A`: probability that the first click is an A click, by adaptive
/// quadrature of `mu gamma rho_ee^2 / rho_gg` over `[0, inf)`.
pub fn p_a(p: &Params) -> f64 {
    p_a_with_tolerance(p, P_A_TOLERANCE)
}

fn p_a_with_tolerance(p: &Params, tol: f64) -> f64 {
    if p.pi_e() == 0.0 {
        return 0.0;
    }
    integrate_half_line(|t| a_jump_density(t, p), p.gamma(), Tolerance::absolute(tol)).value
}

/// Probability of the detection record `seq`.
pub fn p_sequence(seq: &EventSequence, p: &Params) -> f64 {
    nested(seq.b_jumps, seq.ending, p)
}

fn nested(b_jumps: usize, ending: Ending, p: &Params) -> f64 {
    if b_jumps == 0 {
        return match ending {
            Ending::Ground => p0(p),
            Ending::Excited => p_a(p),
        };
    }
    if p.pi_e() == 0.0 {
        return 0.0;
    }
    integrate_half_line(
        |t_b| {
            let density = b_jump_density(t_b, p);
            if density == 0.0 {
                return 0.0;
            }
            density * nested(b_jumps - 1, ending, &post_b_rebase(t_b, p))
        },
        p.gamma(),
        Tolerance::absolute(SEQUENCE_TOLERANCE),
    )
    .value
}
