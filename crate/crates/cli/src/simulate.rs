use anyhow::{bail, Result};
use heralding_core::engine::{run_ensemble, run_trajectory, EnsembleStats, SimConfig, TrajectoryRecord};
use heralding_core::{DetectionScheme, Params};

use crate::args::{SchemeArg, SimulateArgs};
use crate::output::{num, Csv, Run};

pub fn scheme(kind: SchemeArg, alpha: Option<f64>) -> Result<DetectionScheme> {
    Ok(match (kind, alpha) {
        (SchemeArg::FixedLo, Some(a)) => DetectionScheme::fixed_real(a),
        (SchemeArg::FixedLo, None) => bail!("--scheme fixed-lo needs --alpha"),
        (_, Some(_)) => bail!("--alpha only applies to --scheme fixed-lo"),
        (SchemeArg::Counting, None) => DetectionScheme::Counting,
        (SchemeArg::Adaptive, None) => DetectionScheme::AdaptiveLo,
    })
}

pub fn record_config(run: &mut Run, cfg: &SimConfig) {
    run.set("scheme", cfg.scheme.name());
    if let DetectionScheme::FixedLo { alpha } = cfg.scheme {
        run.set("alpha", alpha.re);
    }
    run.set("mu", cfg.params.mu());
    run.set("pi_e", cfg.params.pi_e());
    run.set("n_traj", cfg.n_traj);
    run.set("t_max", cfg.t_max);
    run.set("p_jump_max", cfg.p_jump_max);
    run.set("sample_dt", cfg.sample_dt);
    run.set("record_stride", cfg.record_stride);
    run.set("seed", cfg.master_seed);
}

/// Grid samples and clicks merged in time order; a click row carries the
/// post-click population.
pub fn trajectory_csv(rec: &TrajectoryRecord) -> Csv {
    let mut csv = Csv::new(&["t", "pe", "event", "alpha_re", "alpha_im"]);
    let mut events = rec.events.iter().peekable();
    let mut push_events_before = |csv: &mut Csv, t: f64, inclusive: bool| {
        while let Some(e) = events.next_if(|e| e.t < t || (inclusive && e.t <= t)) {
            csv.row(vec![
                num(e.t),
                num(e.post_population),
                e.detector.to_string(),
                num(e.alpha.re),
                num(e.alpha.im),
            ]);
        }
    };
    for s in &rec.samples {
        push_events_before(&mut csv, s.t, false);
        csv.row(vec![num(s.t), num(s.population), "-".into(), num(s.alpha.re), num(s.alpha.im)]);
    }
    push_events_before(&mut csv, f64::INFINITY, true);
    csv
}

pub fn ensemble_csv(stats: &EnsembleStats) -> Csv {
    let mut csv = Csv::new(&["t", "mean_pe", "stderr"]);
    for m in &stats.mean_population {
        csv.numbers(&[m.t, m.mean, m.stderr]);
    }
    csv
}

pub fn run(args: &SimulateArgs, run: &mut Run) -> Result<()> {
    let cfg = SimConfig::new(Params::unit(args.mu, args.pi_e)?, scheme(args.scheme, args.alpha)?)
        .with_n_traj(args.n_traj)
        .with_t_max(args.t_max)
        .with_p_jump_max(args.p_jump_max)
        .with_sample_dt(args.sample_dt)
        .with_record_stride(args.stride)
        .with_seed(args.seed);
    cfg.validate()?;
    record_config(run, &cfg);

    let csv = if cfg.n_traj == 1 {
        let rec = run_trajectory(&cfg, 0);
        run.set("sequence", &rec.sequence_label);
        trajectory_csv(&rec)
    } else {
        let stats = run_ensemble(&cfg);
        for (label, count) in &stats.sequence_counts {
            run.set(&format!("count.{label}"), count);
        }
        ensemble_csv(&stats)
    };
    run.emit(args.out.as_deref(), &csv)
}
