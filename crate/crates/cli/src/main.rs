mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Job};
use error::CliError;

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Poly(common) => commands::poly::run(&Job::resolve(&common, None)?),
        Command::Verify { common, sweep, inject_fault } => {
            commands::verify::run(&Job::resolve(&common, None)?, sweep, inject_fault)
        }
        Command::Kernel(common) => commands::grid::run_kernel(&Job::resolve(&common, None)?),
        Command::Density(common) => commands::grid::run_density(&Job::resolve(&common, None)?),
        Command::Simulate(common) => commands::simulate::run(&Job::resolve(&common, None)?),
        Command::Correlate { common, points, conjugated } => {
            commands::correlate::run(&Job::resolve(&common, points)?, conjugated)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mop: {e}");
            e.exit_code()
        }
    }
}
