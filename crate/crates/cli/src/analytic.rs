use anyhow::{bail, Result};
use heralding_core::analytic::{
    accumulate, optimize_mu, p0, p_a, p_sequence, scan_mu, scan_spacing, EventSequence,
};
use heralding_core::Params;
use rayon::prelude::*;

use crate::args::{AnalyticArgs, OptimizeArgs, Quantity};
use crate::output::{num, Csv, Run};

/// Grid size of the `--verify` scan.
pub const VERIFY_GRID: usize = 10_000;

fn evaluate(quantity: Quantity, p: &Params) -> Result<Vec<(String, f64)>> {
    let one = |name: &str, v: f64| Ok(vec![(name.to_string(), v)]);
    let seq = |s: &str| p_sequence(&s.parse::<EventSequence>().expect("known label"), p);
    match quantity {
        Quantity::P0 => one("p0", p0(p)),
        Quantity::Pa => one("pa", p_a(p)),
        Quantity::Pba => one("pba", seq("BA")),
        Quantity::Pb0 => one("pb0", seq("B0")),
        Quantity::Pbb0 => one("pbb0", seq("BB0")),
        Quantity::Pbba => one("pbba", seq("BBA")),
        Quantity::Pn | Quantity::Qm => {
            let row = accumulate(p, 2, 2)?;
            let (prefix, values) = match quantity {
                Quantity::Pn => ("pn", row.p_n),
                _ => ("qm", row.q_m),
            };
            Ok(values
                .into_iter()
                .enumerate()
                .map(|(i, v)| (format!("{prefix}{i}"), v))
                .collect())
        }
    }
}

pub fn run_analytic(args: &AnalyticArgs, run: &mut Run) -> Result<()> {
    run.set("quantity", format!("{:?}", args.quantity).to_lowercase());
    run.set("mu", args.mu);
    run.set("pi_e_points", args.pi_e.0.len());
    let rows = args
        .pi_e
        .0
        .par_iter()
        .map(|&pe| evaluate(args.quantity, &Params::unit(args.mu, pe)?).map(|v| (pe, v)))
        .collect::<Result<Vec<_>>>()?;
    let mut csv = Csv::new(&["pi_e", "mu", "quantity", "value"]);
    for (pe, values) in rows {
        for (name, v) in values {
            csv.row(vec![num(pe), num(args.mu), name, num(v)]);
        }
    }
    run.emit(args.out.as_deref(), &csv)
}

pub fn run_optimize(args: &OptimizeArgs, run: &mut Run) -> Result<()> {
    run.set("pi_e_points", args.pi_e.0.len());
    run.set("verify", args.verify);
    let header: &[&str] = if args.verify {
        &["pi_e", "mu_star", "pa_star", "mu_grid", "pa_grid"]
    } else {
        &["pi_e", "mu_star", "pa_star"]
    };
    let rows = args
        .pi_e
        .0
        .par_iter()
        .map(|&pe| {
            let best = optimize_mu(pe)?;
            let grid = if args.verify { Some(scan_mu(pe, VERIFY_GRID)?) } else { None };
            Ok((best, grid))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut csv = Csv::new(header);
    for (best, grid) in rows {
        let mut values = vec![best.pi_e, best.mu_star, best.p_a_star];
        if let Some(g) = grid {
            if (g.mu_star - best.mu_star).abs() > scan_spacing(VERIFY_GRID) {
                bail!(
                    "maximizer {} and grid scan {} disagree at pi_e = {}",
                    best.mu_star,
                    g.mu_star,
                    best.pi_e
                );
            }
            values.extend([g.mu_star, g.p_a_star]);
        }
        csv.numbers(&values);
    }
    run.emit(args.out.as_deref(), &csv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accumulations_expand_to_three_rows() {
        let p = Params::unit(0.5, 0.5).unwrap();
        let pn = evaluate(Quantity::Pn, &p).unwrap();
        let names: Vec<&str> = pn.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["pn0", "pn1", "pn2"]);
        assert_eq!(pn[0].1, evaluate(Quantity::Pa, &p).unwrap()[0].1);
        let qm = evaluate(Quantity::Qm, &p).unwrap();
        assert_eq!(qm[0].1, 1.0 - evaluate(Quantity::P0, &p).unwrap()[0].1);
    }
}
