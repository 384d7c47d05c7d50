//! Monte Carlo wavefunction trajectories for all three detection schemes.
//!
//! Every trajectory draws from its own ChaCha8 stream keyed by
//! `(master_seed, traj_index)`, and ensembles are reduced in fixed-size
//! chunks combined in index order, so results are bit-identical for any
//! number of worker threads.

mod ensemble;
mod estimate;
mod trajectory;

use rayon::prelude::*;

pub use ensemble::{run_ensemble, EnsembleStats, MeanPoint};
pub use estimate::{
    classify_and_estimate, counting_jump_fraction, mean_jump_size, strong_lo_excursion_probability,
    Estimate, JumpSizeStats, SequenceFrequencies, TRUNCATION_TOLERANCE,
};
pub use trajectory::{run_trajectory, Event, Sample, Terminal, TrajectoryRecord};

use crate::detection::ADAPTIVE_ALPHA_FLOOR;
use crate::error::{Error, Result};
use crate::state::{DetectionScheme, Params};

/// Largest allowed per-step jump probability.
pub const MAX_P_JUMP: f64 = 0.05;

/// Trajectories per reduction chunk.
const CHUNK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub params: Params,
    pub scheme: DetectionScheme,
    /// End of the simulated window, in units of `1/gamma`.
    pub t_max: f64,
    /// Cap on `(rate_a + rate_b) dt` per step.
    pub p_jump_max: f64,
    pub n_traj: usize,
    pub master_seed: u64,
    /// Spacing of the uniform sampling grid on `[0, t_max]`.
    pub sample_dt: f64,
    /// Keep every `record_stride`-th grid point in outputs.
    pub record_stride: usize,
}

impl SimConfig {
    pub fn new(params: Params, scheme: DetectionScheme) -> Self {
        Self {
            params,
            scheme,
            t_max: 20.0,
            p_jump_max: 1e-3,
            n_traj: 1,
            master_seed: 0,
            sample_dt: 0.01,
            record_stride: 1,
        }
    }

    pub fn with_t_max(mut self, t_max: f64) -> Self {
        self.t_max = t_max;
        self
    }

    pub fn with_p_jump_max(mut self, p_jump_max: f64) -> Self {
        self.p_jump_max = p_jump_max;
        self
    }

    pub fn with_n_traj(mut self, n_traj: usize) -> Self {
        self.n_traj = n_traj;
        self
    }

    pub fn with_seed(mut self, master_seed: u64) -> Self {
        self.master_seed = master_seed;
        self
    }

    pub fn with_sample_dt(mut self, sample_dt: f64) -> Self {
        self.sample_dt = sample_dt;
        self
    }

    pub fn with_record_stride(mut self, record_stride: usize) -> Self {
        self.record_stride = record_stride;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return bad(format!("t_max must be positive, got {}", self.t_max));
        }
        if !(self.p_jump_max > 0.0 && self.p_jump_max <= MAX_P_JUMP) {
            return bad(format!(
                "p_jump_max must lie in (0, {MAX_P_JUMP}], got {}",
                self.p_jump_max
            ));
        }
        if self.n_traj == 0 {
            return bad("n_traj must be at least 1".into());
        }
        if !(self.sample_dt > 0.0 && self.sample_dt.is_finite()) {
            return bad(format!("sample_dt must be positive, got {}", self.sample_dt));
        }
        if self.record_stride == 0 {
            return bad("record_stride must be at least 1".into());
        }
        match self.scheme {
            DetectionScheme::FixedLo { alpha } if !(alpha.re.is_finite() && alpha.im.is_finite()) => {
                bad(format!("local oscillator amplitude must be finite, got {alpha}"))
            }
            DetectionScheme::AdaptiveLo if self.params.pi_g() < ADAPTIVE_ALPHA_FLOOR => bad(format!(
                "adaptive scheme needs pi_g >= {ADAPTIVE_ALPHA_FLOOR:e}, got {}",
                self.params.pi_g()
            )),
            _ => Ok(()),
        }
    }

    /// Number of points of the full sampling grid.
    pub fn grid_len(&self) -> usize {
        (self.t_max / self.sample_dt + 1e-9).floor() as usize + 1
    }

    pub fn grid_time(&self, index: usize) -> f64 {
        index as f64 * self.sample_dt
    }
}

/// Maps every chunk of trajectory indices in parallel and folds the chunk
/// results sequentially in chunk order.
pub(crate) fn reduce_chunks<T, M, F>(n_traj: usize, map: M, init: T, mut fold: F) -> T
where
    T: Send,
    M: Fn(std::ops::Range<usize>) -> T + Sync + Send,
    F: FnMut(T, T) -> T,
{
    let n_chunks = n_traj.div_ceil(CHUNK);
    let parts: Vec<T> = (0..n_chunks)
        .into_par_iter()
        .map(|c| map(c * CHUNK..((c + 1) * CHUNK).min(n_traj)))
        .collect();
    parts.into_iter().fold(init, &mut fold)
}
