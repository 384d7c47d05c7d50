use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "heralding", version, about = "Adaptive heralding of a two-level emitter: trajectories, detection probabilities and figure data")]
pub struct Cli {
    /// Worker threads; 0 uses one per core.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one trajectory or an ensemble.
    Simulate(SimulateArgs),
    /// Evaluate detection probabilities.
    Analytic(AnalyticArgs),
    /// Find the beam splitter transmissivity that maximizes P_A.
    OptimizeMu(OptimizeArgs),
    /// Write the data series of one figure.
    Figure(FigureArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Counting,
    FixedLo,
    Adaptive,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub scheme: SchemeArg,
    /// Local oscillator amplitude in units of sqrt(gamma); fixed-lo only.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.5)]
    pub pi_e: f64,
    #[arg(long, default_value_t = 1)]
    pub n_traj: usize,
    /// Simulated window in units of 1/gamma.
    #[arg(long, default_value_t = 5.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub p_jump_max: f64,
    /// Spacing of the output grid.
    #[arg(long, default_value_t = 0.01)]
    pub sample_dt: f64,
    /// Keep every n-th grid point.
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    P0,
    Pa,
    Pba,
    Pb0,
    Pbb0,
    Pbba,
    Pn,
    Qm,
}

#[derive(Debug, Args)]
pub struct AnalyticArgs {
    #[arg(long, value_enum)]
    pub quantity: Quantity,
    /// A single value or an inclusive sweep `start:stop:points`.
    #[arg(long)]
    pub pi_e: Sweep,
    #[arg(long, default_value_t = 0.5)]
    pub mu: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub pi_e: Sweep,
    /// Add the optimum of a 10^4-point grid scan and check agreement.
    #[arg(long)]
    pub verify: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureId {
    #[value(name = "1")]
    One,
    #[value(name = "2a")]
    TwoA,
    #[value(name = "2b")]
    TwoB,
    #[value(name = "3")]
    Three,
    #[value(name = "4")]
    Four,
    #[value(name = "5")]
    Five,
    #[value(name = "6")]
    Six,
}

impl FigureId {
    pub fn name(self) -> &'static str {
        match self {
            FigureId::One => "1",
            FigureId::TwoA => "2a",
            FigureId::TwoB => "2b",
            FigureId::Three => "3",
            FigureId::Four => "4",
            FigureId::Five => "5",
            FigureId::Six => "6",
        }
    }
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(long, value_enum)]
    pub figure: FigureId,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Trajectories per ensemble curve.
    #[arg(long, default_value_t = 20_000)]
    pub n_traj: usize,
    /// Initial excited population for the trajectory figures.
    #[arg(long, default_value_t = 0.5)]
    pub pi_e: f64,
    /// Add a Monte Carlo estimate of the strong-oscillator excitation
    /// probability to figure 4.
    #[arg(long)]
    pub phom_mc: bool,
    /// Trajectories per point of the strong-oscillator estimate.
    #[arg(long, default_value_t = 2000)]
    pub phom_n_traj: usize,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    /// Compare the regenerated outputs with the recorded files byte by byte.
    #[arg(long)]
    pub verify: bool,
}

/// A single value or `start:stop:points`, both ends included.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep(pub Vec<f64>);

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [v] => Ok(Sweep(vec![parse(v)?])),
            [a, b, n] => {
                let (a, b) = (parse(a)?, parse(b)?);
                let n: usize = n.trim().parse().map_err(|e| format!("`{n}`: {e}"))?;
                match n {
                    0 => Err("a sweep needs at least one point".into()),
                    1 => Ok(Sweep(vec![a])),
                    _ => Ok(Sweep(
                        (0..n)
                            .map(|i| if i == n - 1 { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
                            .collect(),
                    )),
                }
            }
            _ => Err(format!("expected a value or start:stop:points, got `{s}`")),
        }
    }
}
