//! Figure data series, one CSV per curve.

use std::path::Path;

use anyhow::{bail, Result};
use heralding_core::analytic::{
    accumulate, counting_conditional_population, nojump_density, optimize_mu, p0, p_a,
    post_b_rebase,
};
use heralding_core::detection::b_jump_population_map;
use heralding_core::engine::{run_ensemble, run_trajectory, strong_lo_excursion_probability, SimConfig};
use heralding_core::{DetectionScheme, Params};
use rayon::prelude::*;

use crate::args::{FigureArgs, FigureId};
use crate::output::{Csv, Run};
use crate::simulate::{ensemble_csv, record_config, trajectory_csv};

/// Plotted time window and grid spacing of the trajectory figures.
const T_END: f64 = 5.0;
const DT: f64 = 0.01;
/// Per-step click probability cap of the oscillator figures.
const FIXED_LO_P_JUMP: f64 = 0.02;
const FIG1_JUMP: f64 = 1.2;
const FIG3_A_CLICK: f64 = 1.4;
const FIG3_B_CLICK: f64 = 2.5;
const MU_BALANCED: f64 = 0.5;
const PANEL_MUS: [f64; 3] = [0.2, 0.5, 0.8];
const PHOM_ALPHA: f64 = 5.0;
const PHOM_THRESHOLD: f64 = 0.99;

fn times() -> impl Iterator<Item = f64> {
    (0..=(T_END / DT).round() as usize).map(|i| i as f64 * DT)
}

/// `pi_e` from 0 to 0.99 in steps of 0.01.
fn pi_e_sweep() -> Vec<f64> {
    (0..100).map(|i| i as f64 / 100.0).collect()
}

fn curve(f: impl Fn(f64) -> f64) -> Csv {
    let mut csv = Csv::new(&["t", "pe"]);
    for t in times() {
        csv.numbers(&[t, f(t)]);
    }
    csv
}

/// Population following `before` up to a click at `t_click`, where it
/// steps to `after(t_click)`; `after` is `None` for a trajectory that ends
/// with the click.
fn clicked_curve(t_click: f64, before: impl Fn(f64) -> f64, after: Option<&dyn Fn(f64) -> f64>) -> Csv {
    let mut csv = Csv::new(&["t", "pe"]);
    let eps = 1e-9;
    for t in times().take_while(|&t| t < t_click - eps) {
        csv.numbers(&[t, before(t)]);
    }
    csv.numbers(&[t_click, before(t_click)]);
    match after {
        Some(after) => {
            csv.numbers(&[t_click, after(t_click)]);
            for t in times().filter(|&t| t > t_click + eps) {
                csv.numbers(&[t, after(t)]);
            }
        }
        None => csv.numbers(&[t_click, 1.0]),
    }
    csv
}

fn exponential(pi_e: f64) -> Csv {
    curve(|t| pi_e * (-t).exp())
}

fn sweep_csv(header: &[&str], rows: &[Vec<f64>]) -> Csv {
    let mut csv = Csv::new(header);
    for r in rows {
        csv.numbers(r);
    }
    csv
}

fn trajectory_figure(args: &FigureArgs, scheme: DetectionScheme, p_jump: f64, dir: &Path, run: &mut Run) -> Result<()> {
    let cfg = SimConfig::new(Params::unit(MU_BALANCED, args.pi_e)?, scheme)
        .with_t_max(T_END)
        .with_sample_dt(DT)
        .with_p_jump_max(p_jump)
        .with_n_traj(args.n_traj)
        .with_seed(args.seed);
    cfg.validate()?;
    record_config(run, &cfg);
    let rec = run_trajectory(&cfg, 0);
    run.set("trajectory_sequence_length", rec.events.len());
    run.emit_in(dir, "trajectory.csv", &trajectory_csv(&rec))?;
    run.emit_in(dir, "ensemble.csv", &ensemble_csv(&run_ensemble(&cfg)))?;
    run.emit_in(dir, "exponential.csv", &exponential(args.pi_e))
}

fn figure1(args: &FigureArgs, dir: &Path, run: &mut Run) -> Result<()> {
    let p = Params::unit(MU_BALANCED, args.pi_e)?;
    let cond = |t: f64| counting_conditional_population(t, &p);
    run.emit_in(dir, "no_jump.csv", &curve(cond))?;
    run.set("jump_time", FIG1_JUMP);
    run.emit_in(dir, "jump.csv", &clicked_curve(FIG1_JUMP, cond, Some(&|_| 0.0)))?;
    let cfg = SimConfig::new(p, DetectionScheme::Counting)
        .with_t_max(T_END)
        .with_sample_dt(DT)
        .with_n_traj(args.n_traj)
        .with_seed(args.seed);
    cfg.validate()?;
    record_config(run, &cfg);
    run.emit_in(dir, "ensemble.csv", &ensemble_csv(&run_ensemble(&cfg)))?;
    run.emit_in(dir, "exponential.csv", &exponential(args.pi_e))
}

fn figure3(args: &FigureArgs, dir: &Path, run: &mut Run) -> Result<()> {
    let p = Params::unit(MU_BALANCED, args.pi_e)?;
    run.set("mu", MU_BALANCED);
    run.set("pi_e", args.pi_e);
    run.set("a_click", FIG3_A_CLICK);
    run.set("b_click", FIG3_B_CLICK);
    let x = |t: f64| nojump_density(t, &p).conditional_excited();
    run.emit_in(dir, "no_jump.csv", &curve(x))?;
    run.emit_in(dir, "a_jump.csv", &clicked_curve(FIG3_A_CLICK, x, None))?;
    let rebased = post_b_rebase(FIG3_B_CLICK, &p);
    let after = move |t: f64| nojump_density(t - FIG3_B_CLICK, &rebased).conditional_excited();
    run.emit_in(dir, "b_jump.csv", &clicked_curve(FIG3_B_CLICK, x, Some(&after)))?;
    let mut inset = Csv::new(&["pre", "post"]);
    for i in 0..=100 {
        let pre = i as f64 / 100.0;
        inset.numbers(&[pre, b_jump_population_map(pre, MU_BALANCED)]);
    }
    run.emit_in(dir, "b_map.csv", &inset)
}

fn figure4(args: &FigureArgs, dir: &Path, run: &mut Run) -> Result<()> {
    run.set("mu", MU_BALANCED);
    let rows = pi_e_sweep()
        .par_iter()
        .map(|&pe| {
            let p = Params::unit(MU_BALANCED, pe)?;
            Ok(vec![pe, p_a(&p), 1.0 - p0(&p)])
        })
        .collect::<Result<Vec<_>>>()?;
    let column = |k: usize| rows.iter().map(|r| vec![r[0], r[k]]).collect::<Vec<_>>();
    let bound: Vec<Vec<f64>> = rows.iter().map(|r| vec![r[0], r[0]]).collect();
    run.emit_in(dir, "pa.csv", &sweep_csv(&["pi_e", "p_a"], &column(1)))?;
    run.emit_in(dir, "bound_pi_e.csv", &sweep_csv(&["pi_e", "bound"], &bound))?;
    run.emit_in(dir, "bound_1_minus_p0.csv", &sweep_csv(&["pi_e", "bound"], &column(2)))?;
    if args.phom_mc {
        run.set("phom_alpha", PHOM_ALPHA);
        run.set("phom_threshold", PHOM_THRESHOLD);
        run.set("phom_n_traj", args.phom_n_traj);
        run.set("phom_seed", args.seed);
        let mut csv = Csv::new(&["pi_e", "p_hom_estimate", "stderr", "ci95_lo", "ci95_hi"]);
        for i in 1..=9 {
            let pe = i as f64 / 10.0;
            let cfg = SimConfig::new(Params::unit(MU_BALANCED, pe)?, DetectionScheme::fixed_real(PHOM_ALPHA))
                .with_t_max(T_END)
                .with_p_jump_max(FIXED_LO_P_JUMP)
                .with_n_traj(args.phom_n_traj)
                .with_seed(args.seed);
            let est = strong_lo_excursion_probability(&cfg, PHOM_THRESHOLD)?;
            let (lo, hi) = est.wilson95();
            csv.numbers(&[pe, est.p(), est.stderr(), lo, hi]);
        }
        run.emit_in(dir, "phom_mc_estimate.csv", &csv)?;
    }
    Ok(())
}

fn figure5(dir: &Path, run: &mut Run) -> Result<()> {
    let sweep = pi_e_sweep();
    for mu in PANEL_MUS {
        let rows = sweep
            .par_iter()
            .map(|&pe| {
                let p = Params::unit(mu, pe)?;
                Ok(vec![pe, p_a(&p), 1.0 - p0(&p)])
            })
            .collect::<Result<Vec<_>>>()?;
        run.emit_in(dir, &format!("mu{mu}.csv"), &sweep_csv(&["pi_e", "p_a", "bound_1_minus_p0"], &rows))?;
    }
    let bound: Vec<Vec<f64>> = sweep.iter().map(|&pe| vec![pe, pe]).collect();
    run.emit_in(dir, "bound_pi_e.csv", &sweep_csv(&["pi_e", "bound"], &bound))?;
    let rows = (1..100)
        .into_par_iter()
        .map(|i| {
            let best = optimize_mu(i as f64 / 100.0)?;
            Ok(vec![best.pi_e, best.mu_star, best.p_a_star])
        })
        .collect::<Result<Vec<_>>>()?;
    run.emit_in(dir, "mu_star.csv", &sweep_csv(&["pi_e", "mu_star", "pa_star"], &rows))
}

fn figure6(dir: &Path, run: &mut Run) -> Result<()> {
    for mu in PANEL_MUS {
        let rows = pi_e_sweep()
            .par_iter()
            .map(|&pe| {
                let row = accumulate(&Params::unit(mu, pe)?, 2, 2)?;
                let mut values = vec![pe];
                values.extend(&row.p_n);
                values.extend(&row.q_m);
                Ok(values)
            })
            .collect::<Result<Vec<_>>>()?;
        let header = ["pi_e", "P0", "P1", "P2", "Q0", "Q1", "Q2"];
        run.emit_in(dir, &format!("mu{mu}.csv"), &sweep_csv(&header, &rows))?;
    }
    Ok(())
}

pub fn run(args: &FigureArgs, run: &mut Run) -> Result<()> {
    if args.phom_mc && args.figure != FigureId::Four {
        bail!("--phom-mc only applies to figure 4");
    }
    let dir = args.out_dir.as_path();
    std::fs::create_dir_all(dir)?;
    run.set("figure", args.figure.name());
    match args.figure {
        FigureId::One => figure1(args, dir, run),
        FigureId::TwoA => trajectory_figure(args, DetectionScheme::fixed_real(5.0), FIXED_LO_P_JUMP, dir, run),
        FigureId::TwoB => trajectory_figure(args, DetectionScheme::fixed_real(1.0), FIXED_LO_P_JUMP, dir, run),
        FigureId::Three => figure3(args, dir, run),
        FigureId::Four => figure4(args, dir, run),
        FigureId::Five => figure5(dir, run),
        FigureId::Six => figure6(dir, run),
    }
}
