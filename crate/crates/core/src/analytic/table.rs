use std::collections::BTreeMap;

use rayon::prelude::*;

use super::sequences::{p_sequence, EventSequence};
use crate::engine::{Estimate, SequenceFrequencies};
use crate::error::{Error, Result};
use crate::state::Params;

/// Slack allowed when checking the ordering invariants of a row.
pub const INVARIANT_TOLERANCE: f64 = 1e-8;

/// Sequence probabilities and their accumulations for one `(pi_e, mu)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityRow {
    pub pi_e: f64,
    pub mu: f64,
    pub sequences: BTreeMap<EventSequence, f64>,
    /// `P_N = sum_{n <= N} P(B^n A)` for `N = 0..=n_max`.
    pub p_n: Vec<f64>,
    /// `Q_M = 1 - sum_{m <= M} P(B^m 0)` for `M = 0..=m_max`.
    pub q_m: Vec<f64>,
    pub monte_carlo: Option<SequenceFrequencies>,
    /// Strong-oscillator excursion estimate; only ever filled from Monte Carlo.
    pub p_hom: Option<Estimate>,
}

impl ProbabilityRow {
    pub fn get(&self, seq: EventSequence) -> Option<f64> {
        self.sequences.get(&seq).copied()
    }

    pub fn p0(&self) -> Option<f64> {
        self.get(EventSequence::ground(0))
    }

    pub fn p_a(&self) -> Option<f64> {
        self.get(EventSequence::excited(0))
    }

    pub fn p_ba(&self) -> Option<f64> {
        self.get(EventSequence::excited(1))
    }

    pub fn p_b0(&self) -> Option<f64> {
        self.get(EventSequence::ground(1))
    }

    pub fn p_bb0(&self) -> Option<f64> {
        self.get(EventSequence::ground(2))
    }

    pub fn p_bba(&self) -> Option<f64> {
        self.get(EventSequence::excited(2))
    }

    /// Total probability of the sequences in this row.
    pub fn accounted_mass(&self) -> f64 {
        self.sequences.values().sum()
    }

    pub fn check_invariants(&self, tol: f64) -> Result<()> {
        let fail = |what: String| {
            Err(Error::Invariant(format!(
                "pi_e = {}, mu = {}: {what}",
                self.pi_e, self.mu
            )))
        };
        for (seq, &v) in &self.sequences {
            if !(-tol..=1.0 + tol).contains(&v) {
                return fail(format!("P({seq}) = {v} outside [0, 1]"));
            }
        }
        for w in self.p_n.windows(2) {
            if w[1] < w[0] - tol {
                return fail(format!("P_N decreases: {:?}", self.p_n));
            }
        }
        for w in self.q_m.windows(2) {
            if w[1] > w[0] + tol {
                return fail(format!("Q_M increases: {:?}", self.q_m));
            }
        }
        for &p in &self.p_n {
            if p > self.pi_e + tol {
                return fail(format!("P_N = {p} exceeds pi_e"));
            }
            for &q in &self.q_m {
                if p > q + tol {
                    return fail(format!("P_N = {p} exceeds Q_M = {q}"));
                }
            }
        }
        Ok(())
    }
}

/// Computes `P(B^n A)` for `n <= n_max` and `P(B^m 0)` for `m <= m_max`,
/// their accumulations, and checks the ordering invariants.
pub fn accumulate(p: &Params, n_max: usize, m_max: usize) -> Result<ProbabilityRow> {
    let mut sequences = BTreeMap::new();
    let mut p_n = Vec::with_capacity(n_max + 1);
    let mut running = 0.0;
    for n in 0..=n_max {
        let seq = EventSequence::new(n, super::Ending::Excited)?;
        let v = p_sequence(&seq, p);
        sequences.insert(seq, v);
        running += v;
        p_n.push(running);
    }
    let mut q_m = Vec::with_capacity(m_max + 1);
    let mut running = 0.0;
    for m in 0..=m_max {
        let seq = EventSequence::new(m, super::Ending::Ground)?;
        let v = p_sequence(&seq, p);
        sequences.insert(seq, v);
        running += v;
        q_m.push(1.0 - running);
    }
    let row = ProbabilityRow {
        pi_e: p.pi_e(),
        mu: p.mu(),
        sequences,
        p_n,
        q_m,
        monte_carlo: None,
        p_hom: None,
    };
    row.check_invariants(INVARIANT_TOLERANCE)?;
    Ok(row)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ProbabilityTable {
    pub rows: Vec<ProbabilityRow>,
}

impl ProbabilityTable {
    /// One row per `pi_e` at fixed `mu`, computed in parallel; row order
    /// follows `pi_es`.
    pub fn sweep(pi_es: &[f64], mu: f64, n_max: usize, m_max: usize) -> Result<Self> {
        let rows = pi_es
            .par_iter()
            .map(|&pe| accumulate(&Params::unit(mu, pe)?, n_max, m_max))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { rows })
    }
}
