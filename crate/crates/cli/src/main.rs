//! `revolt`: analyze and simulate Lanchester-type armed-revolt dynamics.

use clap::{Parser, Subcommand};
use revolt_cli::commands::{
    cmd_basin, cmd_classify, cmd_conjecture, cmd_simulate, cmd_sweep, BasinArgs, ClassifyArgs,
    ConjectureArgs, SimulateArgs, SweepArgs,
};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "revolt",
    about = "Lanchester-type dynamics of armed revolts: outcomes, trajectories, maps, basins",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analytic outcome of a scenario, with thresholds and stability reports.
    Classify(ClassifyArgs),
    /// Integrate a trajectory and write it as CSV.
    Simulate(SimulateArgs),
    /// Outcome map / Blue-control surface over a two-parameter grid.
    Sweep(SweepArgs),
    /// Basin-of-attraction slice of the opportunistic model with separatrix
    /// location.
    Basin(BasinArgs),
    /// Monte Carlo probe of the intervention-stalemate stability condition.
    Conjecture(ConjectureArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version as "errors" with exit code 0.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let result = match &cli.command {
        Command::Classify(args) => cmd_classify(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Basin(args) => cmd_basin(args),
        Command::Conjecture(args) => cmd_conjecture(args),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
