use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SimConfig;
use crate::detection::{adaptive_alpha, apply_jump, no_jump_step, rates};
use crate::state::{DetectionScheme, Detector, EmitterState};

/// One detector click.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub t: f64,
    pub detector: Detector,
    pub pre_population: f64,
    pub post_population: f64,
    /// Oscillator amplitude the click was recorded with.
    pub alpha: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Terminal {
    /// Ended by an A click under the adaptive scheme.
    HeraldedExcited,
    /// Reached `t_max` without heralding.
    Decayed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub population: f64,
    /// Oscillator amplitude in force at `t`.
    pub alpha: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub samples: Vec<Sample>,
    pub events: Vec<Event>,
    pub terminal: Terminal,
    /// Detector letters in click order, followed by `0` unless heralded;
    /// under the adaptive scheme this is `B^m 0` or `B^n A`.
    pub sequence_label: String,
}

/// Per-trajectory random stream.
pub(crate) fn trajectory_rng(master_seed: u64, traj_index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(traj_index as u64);
    rng
}

pub(crate) fn oscillator(scheme: &DetectionScheme, s: &EmitterState, cfg: &SimConfig) -> Complex64 {
    match scheme {
        DetectionScheme::Counting => Complex64::new(0.0, 0.0),
        DetectionScheme::FixedLo { alpha } => *alpha,
        DetectionScheme::AdaptiveLo => {
            adaptive_alpha(s, &cfg.params).expect("ground population stays above the floor until an A click")
        }
    }
}

pub(crate) fn sequence_label(events: &[Event], terminal: Terminal) -> String {
    let mut label: String = events.iter().map(|e| e.detector.as_char()).collect();
    if terminal == Terminal::Decayed {
        label.push('0');
    }
    label
}

/// Outcome of propagating one trajectory.
pub(crate) struct Propagation {
    pub events: Vec<Event>,
    pub terminal: Terminal,
    /// Time at which the propagation stopped.
    pub end_time: f64,
    pub final_state: EmitterState,
    /// Index of the first grid point that was not visited.
    pub next_sample: usize,
    pub max_population: f64,
}

#[derive(Clone, Copy)]
pub(crate) struct PropagateOptions {
    /// Stop as soon as the excited population exceeds this value.
    pub stop_above: Option<f64>,
}

#[derive(Clone, Copy, PartialEq)]
enum StepEnd {
    Interior,
    Sample(f64),
    Horizon,
}

/// Jump/no-jump loop with the step `dt = min(p_jump_max / total_rate,
/// next grid point - t, t_max - t)`. Every grid point is reported to `sink`.
///
/// With a fixed oscillator a click is placed mid-step, between two half
/// no-click steps; applying it to the start-of-step state biases the
/// ensemble mean at strong oscillator fields. Under the adaptive scheme the
/// click acts on the start-of-step state, the one its oscillator amplitude
/// was computed for, so the B-click map and the heralded `|e>` stay exact.
pub(crate) fn propagate<S>(
    cfg: &SimConfig,
    traj_index: usize,
    opts: PropagateOptions,
    mut sink: S,
) -> Propagation
where
    S: FnMut(usize, f64, &EmitterState, Complex64),
{
    let p = &cfg.params;
    let mut rng = trajectory_rng(cfg.master_seed, traj_index);
    let mut state = p.initial_state();
    let mut t = 0.0;
    let mut events = Vec::new();
    let mut terminal = Terminal::Decayed;
    let grid_len = cfg.grid_len();
    let mut max_population = state.excited_population();

    sink(0, 0.0, &state, oscillator(&cfg.scheme, &state, cfg));
    let mut next_sample = 1;
    let exceeded = |pop: f64| opts.stop_above.is_some_and(|thr| pop > thr);

    while t < cfg.t_max && !exceeded(max_population) {
        let alpha = oscillator(&cfg.scheme, &state, cfg);
        let r = rates(&state, alpha, p);
        let total = r.total();

        let mut dt = cfg.t_max - t;
        let mut end = StepEnd::Horizon;
        if next_sample < grid_len {
            let ts = cfg.grid_time(next_sample);
            if ts - t <= dt {
                dt = ts - t;
                end = StepEnd::Sample(ts);
            }
        }
        if total > 0.0 {
            let dt_jump = cfg.p_jump_max / total;
            if dt_jump < dt {
                dt = dt_jump;
                end = StepEnd::Interior;
            }
        }
        let t_next = match end {
            StepEnd::Interior => t + dt,
            StepEnd::Sample(ts) => ts,
            StepEnd::Horizon => cfg.t_max,
        };

        let u: f64 = rng.random();
        if u < total * dt {
            let v: f64 = rng.random();
            let detector = if v * total < r.rate_a { Detector::A } else { Detector::B };
            let midpoint = cfg.scheme != DetectionScheme::AdaptiveLo;
            if midpoint {
                state = no_jump_step(&state, alpha, p, 0.5 * dt).0;
            }
            let (outcome, mut post) = apply_jump(&state, detector, alpha, p)
                .expect("a detector is only chosen with positive rate");
            if midpoint {
                post = no_jump_step(&post, alpha, p, 0.5 * dt).0;
            }
            state = post;
            events.push(Event {
                t: if midpoint { t + 0.5 * dt } else { t },
                detector,
                pre_population: outcome.pre_population,
                post_population: outcome.post_population,
                alpha,
            });
            if detector == Detector::A && !midpoint {
                terminal = Terminal::HeraldedExcited;
                max_population = max_population.max(state.excited_population());
                break;
            }
        } else {
            state = no_jump_step(&state, alpha, p, dt).0;
        }
        t = t_next;
        max_population = max_population.max(state.excited_population());

        if let StepEnd::Sample(ts) = end {
            sink(next_sample, ts, &state, oscillator(&cfg.scheme, &state, cfg));
            next_sample += 1;
        }
    }

    Propagation {
        events,
        terminal,
        end_time: t,
        final_state: state,
        next_sample,
        max_population,
    }
}

/// Simulates trajectory `traj_index` of `cfg`, recording every
/// `record_stride`-th point of the sampling grid plus all clicks.
///
/// The result depends only on `cfg` and `traj_index`. Panics if `cfg` does
/// not validate.
pub fn run_trajectory(cfg: &SimConfig, traj_index: usize) -> TrajectoryRecord {
    cfg.validate().expect("invalid simulation config");
    let mut samples = Vec::new();
    let stride = cfg.record_stride;
    let run = propagate(
        cfg,
        traj_index,
        PropagateOptions { stop_above: None },
        |i, t, s, alpha| {
            if i % stride == 0 {
                samples.push(Sample {
                    t,
                    population: s.excited_population(),
                    alpha,
                });
            }
        },
    );
    TrajectoryRecord {
        sequence_label: sequence_label(&run.events, run.terminal),
        samples,
        events: run.events,
        terminal: run.terminal,
    }
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;
    use crate::analytic::counting_conditional_population;
    use crate::detection::b_jump_population_map;
    use crate::state::Params;

    fn cfg(scheme: DetectionScheme, mu: f64, pe: f64) -> SimConfig {
        SimConfig::new(Params::unit(mu, pe).unwrap(), scheme).with_t_max(5.0)
    }

    #[test]
    fn counting_trajectories_follow_no_jump_curve_then_drop_to_ground() {
        let c = cfg(DetectionScheme::Counting, 0.5, 0.5);
        let mut saw_jump = false;
        let mut saw_silent = false;
        for i in 0..40 {
            let rec = run_trajectory(&c, i);
            assert!(rec.events.len() <= 1);
            let t_jump = rec.events.first().map(|e| e.t).unwrap_or(f64::INFINITY);
            for s in &rec.samples {
                if s.t < t_jump {
                    assert_abs_diff_eq!(
                        s.population,
                        counting_conditional_population(s.t, &c.params),
                        epsilon = 1e-10
                    );
                } else {
                    assert_eq!(s.population, 0.0);
                }
            }
            saw_jump |= !rec.events.is_empty();
            saw_silent |= rec.events.is_empty();
            assert_eq!(rec.terminal, Terminal::Decayed);
        }
        assert!(saw_jump && saw_silent);
    }

    #[test]
    fn samples_sit_on_the_grid() {
        let c = cfg(DetectionScheme::fixed_real(1.0), 0.5, 0.5).with_record_stride(10);
        let rec = run_trajectory(&c, 3);
        assert_eq!(rec.samples.len(), 51);
        for (i, s) in rec.samples.iter().enumerate() {
            assert_eq!(s.t, (10 * i) as f64 * 0.01);
            assert!((0.0..=1.0).contains(&s.population));
        }
        assert!(rec.samples.windows(2).all(|w| w[0].t < w[1].t));
    }

    #[test]
    fn adaptive_a_click_terminates_at_full_excitation() {
        let c = cfg(DetectionScheme::AdaptiveLo, 0.5, 0.5).with_t_max(20.0);
        let mut heralded = 0;
        for i in 0..200 {
            let rec = run_trajectory(&c, i);
            let mu = c.params.mu();
            for e in &rec.events {
                match e.detector {
                    Detector::A => assert_abs_diff_eq!(e.post_population, 1.0, epsilon = 1e-12),
                    Detector::B => assert_abs_diff_eq!(
                        e.post_population,
                        b_jump_population_map(e.pre_population, mu),
                        epsilon = 1e-10
                    ),
                }
            }
            let last_is_a = rec.events.last().is_some_and(|e| e.detector == Detector::A);
            assert_eq!(rec.terminal == Terminal::HeraldedExcited, last_is_a);
            if last_is_a {
                heralded += 1;
                assert!(rec.sequence_label.ends_with('A'));
                assert!(rec.events[..rec.events.len() - 1].iter().all(|e| e.detector == Detector::B));
            } else {
                assert!(rec.sequence_label.ends_with('0'));
            }
        }
        assert!(heralded > 0);
    }

    #[test]
    fn fixed_oscillator_moves_population_both_ways() {
        let c = cfg(DetectionScheme::fixed_real(1.0), 0.5, 0.5);
        let mut up = 0;
        let mut down = 0;
        for i in 0..50 {
            for e in run_trajectory(&c, i).events {
                if e.post_population > e.pre_population {
                    up += 1;
                } else if e.post_population < e.pre_population {
                    down += 1;
                }
                assert!(e.post_population > 0.0 && e.post_population < 1.0);
            }
        }
        assert!(up > 0 && down > 0);
    }

    #[test]
    fn ground_state_emitter_is_inert_under_adaptive_detection() {
        let c = cfg(DetectionScheme::AdaptiveLo, 0.5, 0.0);
        let rec = run_trajectory(&c, 0);
        assert!(rec.events.is_empty());
        assert!(rec.samples.iter().all(|s| s.population == 0.0 && s.alpha.norm() == 0.0));
        assert_eq!(rec.sequence_label, "0");
    }

    #[test]
    fn deterministic_per_index() {
        let c = cfg(DetectionScheme::fixed_real(2.0), 0.3, 0.6).with_seed(11);
        assert_eq!(run_trajectory(&c, 5), run_trajectory(&c, 5));
        assert_ne!(run_trajectory(&c, 5), run_trajectory(&c, 6));
        assert_ne!(run_trajectory(&c, 5), run_trajectory(&c.with_seed(12), 5));
    }

    #[test]
    fn real_amplitudes_stay_real_along_trajectories() {
        let c = cfg(DetectionScheme::fixed_real(3.0), 0.4, 0.7);
        for i in 0..5 {
            let run = propagate(
                &c,
                i,
                PropagateOptions { stop_above: None },
                |_, _, s, _| assert!(s.max_imaginary() < 1e-12),
            );
            assert!(run.final_state.max_imaginary() < 1e-12);
        }
    }
}
