use std::collections::BTreeMap;

use super::trajectory::{propagate, sequence_label, PropagateOptions, Propagation, Terminal};
use super::{reduce_chunks, SimConfig};
use crate::error::{Error, Result};
use crate::state::DetectionScheme;

/// Trajectories whose population at `t_max` is below this count as ending in
/// the ground state.
pub const TRUNCATION_TOLERANCE: f64 = 1e-6;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Binomial frequency `successes / n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Estimate {
    pub successes: usize,
    pub n: usize,
}

impl Estimate {
    pub fn new(successes: usize, n: usize) -> Self {
        assert!(successes <= n && n > 0, "need 0 <= successes <= n, n > 0");
        Self { successes, n }
    }

    pub fn p(&self) -> f64 {
        self.successes as f64 / self.n as f64
    }

    /// Plug-in standard error `sqrt(p (1 - p) / n)`.
    pub fn stderr(&self) -> f64 {
        let p = self.p();
        (p * (1.0 - p) / self.n as f64).sqrt()
    }

    /// Standard error if the true probability were `p_true`.
    pub fn stderr_at(&self, p_true: f64) -> f64 {
        (p_true * (1.0 - p_true) / self.n as f64).sqrt()
    }

    /// Deviation from `p_true` in units of its binomial standard error.
    pub fn z_score(&self, p_true: f64) -> f64 {
        let diff = self.p() - p_true;
        if diff == 0.0 {
            return 0.0;
        }
        diff / self.stderr_at(p_true)
    }

    /// Wilson score interval at 95% confidence.
    pub fn wilson95(&self) -> (f64, f64) {
        let n = self.n as f64;
        let p = self.p();
        let z2 = Z95 * Z95;
        let denom = 1.0 + z2 / n;
        let centre = (p + z2 / (2.0 * n)) / denom;
        let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
        let lo = if self.successes == 0 { 0.0 } else { (centre - half).max(0.0) };
        let hi = if self.successes == self.n { 1.0 } else { (centre + half).min(1.0) };
        (lo, hi)
    }
}

/// Monte Carlo sequence frequencies of an adaptive ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceFrequencies {
    pub n_traj: usize,
    /// Label (`"0"`, `"A"`, `"B0"`, `"BA"`, ...) to count.
    pub counts: BTreeMap<String, usize>,
    /// Trajectories still above `truncation_tolerance` at `t_max`.
    pub unresolved: usize,
    pub truncation_tolerance: f64,
}

impl SequenceFrequencies {
    pub fn count(&self, label: &str) -> usize {
        self.counts.get(label).copied().unwrap_or(0)
    }

    pub fn estimate(&self, label: &str) -> Estimate {
        Estimate::new(self.count(label), self.n_traj)
    }

    /// `B^n A` for `n = 0..=n_max`.
    pub fn excited(&self, n: usize) -> Estimate {
        self.estimate(&format!("{}A", "B".repeat(n)))
    }

    /// `B^m 0` for `m = 0..=m_max`.
    pub fn ground(&self, m: usize) -> Estimate {
        self.estimate(&format!("{}0", "B".repeat(m)))
    }

    /// Empirical `P_N` for `N = 0..=n_max`.
    pub fn p_n(&self, n_max: usize) -> Vec<f64> {
        running(n_max, |n| self.excited(n).successes, self.n_traj)
    }

    /// Empirical `Q_M` for `M = 0..=m_max`.
    pub fn q_m(&self, m_max: usize) -> Vec<f64> {
        running(m_max, |m| self.ground(m).successes, self.n_traj)
            .into_iter()
            .map(|p| 1.0 - p)
            .collect()
    }

    /// Largest number of B clicks seen in any record.
    pub fn max_b_clicks(&self) -> usize {
        self.counts.keys().map(|l| l.len() - 1).max().unwrap_or(0)
    }
}

fn running(max: usize, count: impl Fn(usize) -> usize, n: usize) -> Vec<f64> {
    let mut acc = 0;
    (0..=max)
        .map(|i| {
            acc += count(i);
            acc as f64 / n as f64
        })
        .collect()
}

fn require(cfg: &SimConfig, ok: bool, what: &str) -> Result<()> {
    cfg.validate()?;
    if ok {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "{what} needs a different scheme, got {}",
            cfg.scheme.name()
        )))
    }
}

const UNSAMPLED: PropagateOptions = PropagateOptions { stop_above: None };

fn count_fraction(cfg: &SimConfig, opts: PropagateOptions, hit: impl Fn(&Propagation) -> bool + Sync) -> Estimate {
    let successes = reduce_chunks(
        cfg.n_traj,
        |range| {
            range
                .filter(|&i| hit(&propagate(cfg, i, opts, |_, _, _, _| {})))
                .count()
        },
        0,
        |a, b| a + b,
    );
    Estimate::new(successes, cfg.n_traj)
}

/// Classifies `cfg.n_traj` adaptive trajectories by their detection record.
pub fn classify_and_estimate(cfg: &SimConfig) -> Result<SequenceFrequencies> {
    require(cfg, cfg.scheme == DetectionScheme::AdaptiveLo, "sequence classification")?;
    let (counts, unresolved) = reduce_chunks(
        cfg.n_traj,
        |range| {
            let mut counts = BTreeMap::<String, usize>::new();
            let mut unresolved = 0;
            for i in range {
                let run = propagate(cfg, i, UNSAMPLED, |_, _, _, _| {});
                if run.terminal == Terminal::Decayed
                    && run.final_state.excited_population() >= TRUNCATION_TOLERANCE
                {
                    unresolved += 1;
                } else {
                    *counts.entry(sequence_label(&run.events, run.terminal)).or_default() += 1;
                }
            }
            (counts, unresolved)
        },
        (BTreeMap::new(), 0),
        |(mut counts, u), (part, v)| {
            for (label, n) in part {
                *counts.entry(label).or_default() += n;
            }
            (counts, u + v)
        },
    );
    Ok(SequenceFrequencies {
        n_traj: cfg.n_traj,
        counts,
        unresolved,
        truncation_tolerance: TRUNCATION_TOLERANCE,
    })
}

/// Fraction of photon-counting trajectories with at least one click.
pub fn counting_jump_fraction(cfg: &SimConfig) -> Result<Estimate> {
    require(cfg, cfg.scheme == DetectionScheme::Counting, "jump counting")?;
    Ok(count_fraction(cfg, UNSAMPLED, |run| !run.events.is_empty()))
}

/// Fraction of fixed-oscillator trajectories whose excited population ever
/// exceeds `threshold` before `t_max`.
pub fn strong_lo_excursion_probability(cfg: &SimConfig, threshold: f64) -> Result<Estimate> {
    require(
        cfg,
        matches!(cfg.scheme, DetectionScheme::FixedLo { .. }),
        "excursion estimate",
    )?;
    crate::error::check_domain("threshold", threshold, (0.0..=1.0).contains(&threshold), "[0, 1]")?;
    let opts = PropagateOptions {
        stop_above: Some(threshold),
    };
    Ok(count_fraction(cfg, opts, |run| run.max_population > threshold))
}

/// Mean absolute population change per click.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpSizeStats {
    pub mean_abs_change: f64,
    pub stderr: f64,
    pub n_events: usize,
}

/// Averages `|post - pre|` over all clicks of a fixed-oscillator ensemble.
pub fn mean_jump_size(cfg: &SimConfig) -> Result<JumpSizeStats> {
    require(
        cfg,
        matches!(cfg.scheme, DetectionScheme::FixedLo { .. }),
        "jump-size measurement",
    )?;
    let (sum, sum_sq, n) = reduce_chunks(
        cfg.n_traj,
        |range| {
            let mut acc = (0.0, 0.0, 0usize);
            for i in range {
                for e in propagate(cfg, i, UNSAMPLED, |_, _, _, _| {}).events {
                    let d = (e.post_population - e.pre_population).abs();
                    acc.0 += d;
                    acc.1 += d * d;
                    acc.2 += 1;
                }
            }
            acc
        },
        (0.0, 0.0, 0),
        |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2),
    );
    if n == 0 {
        return Ok(JumpSizeStats {
            mean_abs_change: 0.0,
            stderr: 0.0,
            n_events: 0,
        });
    }
    let nf = n as f64;
    let mean = sum / nf;
    let var = if n > 1 {
        ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(JumpSizeStats {
        mean_abs_change: mean,
        stderr: (var / nf).sqrt(),
        n_events: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::Params;

    fn cfg(scheme: DetectionScheme, pe: f64) -> SimConfig {
        SimConfig::new(Params::unit(0.5, pe).unwrap(), scheme)
    }

    #[test]
    fn estimate_basics() {
        let e = Estimate::new(30, 100);
        assert_eq!(e.p(), 0.3);
        assert!((e.stderr() - (0.21f64 / 100.0).sqrt()).abs() < 1e-15);
        let (lo, hi) = e.wilson95();
        assert!(lo < 0.3 && 0.3 < hi);
        // reference values from the Wilson formula at z = 1.96
        assert!((lo - 0.2189).abs() < 1e-3 && (hi - 0.3958).abs() < 1e-3);
        assert_eq!(Estimate::new(0, 10).wilson95().0, 0.0);
        assert_eq!(Estimate::new(10, 10).wilson95().1, 1.0);
        assert_eq!(e.z_score(0.3), 0.0);
        assert!(e.z_score(0.2) > 0.0);
    }

    #[test]
    fn scheme_checks() {
        let adaptive = cfg(DetectionScheme::AdaptiveLo, 0.5);
        let counting = cfg(DetectionScheme::Counting, 0.5);
        assert!(counting_jump_fraction(&adaptive).is_err());
        assert!(classify_and_estimate(&counting).is_err());
        assert!(strong_lo_excursion_probability(&counting, 0.9).is_err());
        assert!(mean_jump_size(&adaptive).is_err());
        let fixed = cfg(DetectionScheme::fixed_real(5.0), 0.5);
        assert!(strong_lo_excursion_probability(&fixed, 1.5).is_err());
    }

    #[test]
    fn ground_state_trivialities() {
        let freq = classify_and_estimate(&cfg(DetectionScheme::AdaptiveLo, 0.0).with_n_traj(100)).unwrap();
        assert_eq!(freq.count("0"), 100);
        assert_eq!(freq.unresolved, 0);
        let f = counting_jump_fraction(&cfg(DetectionScheme::Counting, 0.0).with_n_traj(100)).unwrap();
        assert_eq!(f.successes, 0);
        let fixed = cfg(DetectionScheme::fixed_real(5.0), 0.0).with_n_traj(20).with_p_jump_max(0.05);
        assert_eq!(strong_lo_excursion_probability(&fixed, 0.99).unwrap().successes, 0);
    }

    #[test]
    fn classification_covers_every_trajectory() {
        let freq = classify_and_estimate(&cfg(DetectionScheme::AdaptiveLo, 0.6).with_n_traj(500)).unwrap();
        assert_eq!(freq.counts.values().sum::<usize>() + freq.unresolved, 500);
        assert_eq!(freq.unresolved, 0);
        for label in freq.counts.keys() {
            let (head, last) = label.split_at(label.len() - 1);
            assert!(head.chars().all(|c| c == 'B'));
            assert!(last == "0" || last == "A");
        }
        let p_n = freq.p_n(2);
        let q_m = freq.q_m(2);
        assert!(p_n.windows(2).all(|w| w[0] <= w[1]));
        assert!(q_m.windows(2).all(|w| w[0] >= w[1]));
        assert!(p_n[2] <= q_m[2]);
    }

    #[test]
    fn excursions_shrink_with_threshold() {
        let fixed = cfg(DetectionScheme::fixed_real(5.0), 0.5)
            .with_n_traj(64)
            .with_p_jump_max(0.05)
            .with_t_max(5.0);
        let mut last = usize::MAX;
        for thr in [0.6, 0.8, 0.95, 0.99] {
            let e = strong_lo_excursion_probability(&fixed, thr).unwrap();
            assert!(e.successes <= last);
            last = e.successes;
        }
        assert!(strong_lo_excursion_probability(&fixed, 0.5).unwrap().successes == 64);
    }

    #[test]
    fn jump_sizes_shrink_with_oscillator_strength() {
        let size = |alpha: f64| {
            let c = cfg(DetectionScheme::fixed_real(alpha), 0.5)
                .with_n_traj(32)
                .with_t_max(3.0)
                .with_p_jump_max(0.05);
            mean_jump_size(&c).unwrap()
        };
        let small = size(2.0);
        let large = size(8.0);
        assert!(small.n_events > 0 && large.n_events > small.n_events);
        assert!(large.mean_abs_change < small.mean_abs_change / 2.0);
    }
}
