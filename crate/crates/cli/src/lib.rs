//! Command-line front end of `heralding-core`: trajectory and ensemble
//! simulation, analytic probabilities, the transmissivity optimizer and the
//! figure data sets. Every command writes a manifest that `replay` can rerun.

pub mod args;
mod analytic;
mod figure;
pub mod output;
mod simulate;

use std::ffi::OsString;
use std::fs;

use anyhow::{bail, Context, Result};
use clap::Parser;

use args::{Cli, Command, ReplayArgs};
use output::{Manifest, Run};

/// Parses `argv` (program name first) and runs the command.
pub fn run_args<I, T>(argv: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(&argv)?;
    let argv = argv
        .iter()
        .map(|a| a.to_str().map(str::to_owned).context("command line arguments must be UTF-8"))
        .collect::<Result<Vec<_>>>()?;
    run(cli, argv)
}

/// Runs a parsed command inside a thread pool of `cli.threads` workers.
pub fn run(cli: Cli, argv: Vec<String>) -> Result<()> {
    if let Command::Replay(args) = &cli.command {
        return replay(args);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .context("building the thread pool")?;
    pool.install(|| {
        let mut run = Run::new(argv);
        run.set("threads", rayon::current_num_threads());
        match &cli.command {
            Command::Simulate(a) => simulate::run(a, &mut run)?,
            Command::Analytic(a) => analytic::run_analytic(a, &mut run)?,
            Command::OptimizeMu(a) => analytic::run_optimize(a, &mut run)?,
            Command::Figure(a) => figure::run(a, &mut run)?,
            Command::Replay(_) => unreachable!("handled above"),
        }
        run.finish()?;
        Ok(())
    })
}

fn replay(args: &ReplayArgs) -> Result<()> {
    let text = fs::read_to_string(&args.manifest)
        .with_context(|| format!("reading {}", args.manifest.display()))?;
    let manifest = Manifest::parse(&text)?;
    if manifest.argv.iter().skip(1).any(|a| a == "replay") {
        bail!("a manifest cannot record a replay");
    }
    let before = if args.verify {
        if manifest.outputs.is_empty() {
            bail!("the manifest lists no output files to verify");
        }
        manifest
            .outputs
            .iter()
            .map(|p| fs::read(p).with_context(|| format!("reading {}", p.display())))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    run_args(&manifest.argv)?;
    for (path, old) in manifest.outputs.iter().zip(&before) {
        let new = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        if &new != old {
            bail!("{} differs from the recorded output", path.display());
        }
    }
    if args.verify {
        eprintln!("replay verified {} file(s)", before.len());
    }
    Ok(())
}
