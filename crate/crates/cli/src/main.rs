//! Command-line interface for periodogram-maximum testing.
//!
//! Subcommands: `test` runs one peak test on an observed series, `simulate`
//! generates series from the bundled process models, and `mc` hosts the
//! Monte Carlo verification suites. All runs are deterministic given the
//! seed; worker threads never change results. Errors leave a JSON object on
//! stderr and exit 2 (usage or config), 3 (data), or 4 (threshold).

mod cmd_mc;
mod cmd_simulate;
mod config;
mod data;
mod errors;
mod pipeline;
mod procspec;
mod report;

use clap::Parser;

#[derive(Debug, Parser)]
#[command(name = "periomax", version, about = "Hidden-periodicity tests built on periodogram maxima")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Subcommand)]
enum Command {
    /// Test an observed series for a hidden periodicity.
    Test(cmd_test::TestArgs),
    /// Generate a series from a process model.
    Simulate(cmd_simulate::SimulateArgs),
    /// Monte Carlo verification suites.
    #[command(subcommand)]
    Mc(cmd_mc::McSuite),
}

fn main() {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Test(args) => cmd_test::run(args),
        Command::Simulate(args) => cmd_simulate::run(args),
        Command::Mc(suite) => cmd_mc::run(suite),
    };
    if let Err(error) = outcome {
        report::emit_error(&error);
        std::process::exit(error.exit_code());
    }
}
