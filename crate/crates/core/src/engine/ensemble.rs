use std::collections::BTreeMap;

use super::trajectory::{propagate, sequence_label, PropagateOptions, Terminal};
use super::{reduce_chunks, SimConfig};
use crate::state::DetectionScheme;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanPoint {
    pub t: f64,
    pub mean: f64,
    /// Sample standard deviation over `sqrt(n_traj)`.
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleStats {
    pub mean_population: Vec<MeanPoint>,
    pub sequence_counts: BTreeMap<String, usize>,
    pub n_traj: usize,
}

struct Partial {
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
    counts: BTreeMap<String, usize>,
}

impl Partial {
    fn empty(len: usize) -> Self {
        Self {
            sum: vec![0.0; len],
            sum_sq: vec![0.0; len],
            counts: BTreeMap::new(),
        }
    }

    fn merge(mut self, other: Partial) -> Self {
        for (a, b) in self.sum.iter_mut().zip(&other.sum) {
            *a += b;
        }
        for (a, b) in self.sum_sq.iter_mut().zip(&other.sum_sq) {
            *a += b;
        }
        for (label, n) in other.counts {
            *self.counts.entry(label).or_default() += n;
        }
        self
    }
}

/// Key under which a trajectory is counted. Fixed-oscillator records carry
/// hundreds of clicks, so they are summarized as `<n_a>A<n_b>B`.
fn count_key(cfg: &SimConfig, run: &super::trajectory::Propagation) -> String {
    match cfg.scheme {
        DetectionScheme::FixedLo { .. } => {
            let n_a = run
                .events
                .iter()
                .filter(|e| e.detector == crate::state::Detector::A)
                .count();
            format!("{n_a}A{}B", run.events.len() - n_a)
        }
        _ => sequence_label(&run.events, run.terminal),
    }
}

/// Runs `cfg.n_traj` trajectories and averages the excited population on
/// the decimated sampling grid.
///
/// Heralded adaptive trajectories stop at the A click; for the mean they are
/// continued as the unobserved decay `exp(-gamma (t - t_A))` of the fully
/// excited emitter. Panics if `cfg` does not validate.
pub fn run_ensemble(cfg: &SimConfig) -> EnsembleStats {
    cfg.validate().expect("invalid simulation config");
    let grid_len = cfg.grid_len();
    let stride = cfg.record_stride;
    let kept: Vec<usize> = (0..grid_len).step_by(stride).collect();
    let slot = |i: usize| (i % stride == 0).then_some(i / stride);
    let gamma = cfg.params.gamma();

    let total = reduce_chunks(
        cfg.n_traj,
        |range| {
            let mut part = Partial::empty(kept.len());
            let mut pops = vec![0.0; kept.len()];
            for idx in range {
                let run = propagate(
                    cfg,
                    idx,
                    PropagateOptions { stop_above: None },
                    |i, _, s, _| {
                        if let Some(k) = slot(i) {
                            pops[k] = s.excited_population();
                        }
                    },
                );
                if run.terminal == Terminal::HeraldedExcited {
                    for i in run.next_sample..grid_len {
                        if let Some(k) = slot(i) {
                            pops[k] = (-gamma * (cfg.grid_time(i) - run.end_time)).exp();
                        }
                    }
                }
                for (k, &x) in pops.iter().enumerate() {
                    part.sum[k] += x;
                    part.sum_sq[k] += x * x;
                }
                *part.counts.entry(count_key(cfg, &run)).or_default() += 1;
            }
            part
        },
        Partial::empty(kept.len()),
        Partial::merge,
    );

    let n = cfg.n_traj as f64;
    let mean_population = kept
        .iter()
        .enumerate()
        .map(|(k, &i)| {
            let mean = total.sum[k] / n;
            let stderr = if cfg.n_traj > 1 {
                let var = ((total.sum_sq[k] - n * mean * mean) / (n - 1.0)).max(0.0);
                (var / n).sqrt()
            } else {
                0.0
            };
            MeanPoint {
                t: cfg.grid_time(i),
                mean,
                stderr,
            }
        })
        .collect();

    EnsembleStats {
        mean_population,
        sequence_counts: total.counts,
        n_traj: cfg.n_traj,
    }
}
