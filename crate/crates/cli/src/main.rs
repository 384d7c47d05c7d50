use std::process::ExitCode;

use clap::Parser;
use heralding_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match heralding_cli::run(cli, std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
