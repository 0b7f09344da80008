//! `entropic`: entropic uncertainty bounds for distinct and successive
//! measurements from the command line.

mod commands;
mod error;
mod output;
mod scenario;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use entropic_core::LogBase;

use commands::bounds::BoundsArgs;
use commands::curves::{SweepArgs, Table1Args};
use commands::simulate::SimulateArgs;
use commands::verify::VerifyArgs;
use output::{parse_log_base, Context, Format};

#[derive(Parser, Debug)]
#[command(name = "entropic", version, about = "Entropic uncertainty bounds for distinct and successive measurements")]
struct Cli {
    /// Logarithm base for every reported entropy: `e` or a number > 1.
    #[arg(long, global = true, default_value = "e", value_parser = parse_log_base)]
    log_base: LogBase<f64>,
    /// Seed for optimizer starts and sampling.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Suppress footnotes, summaries and timing.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analytic and numeric bounds for two or three observables.
    Bounds(BoundsArgs),
    /// Reproduce the reference table for a spin-½ pair at 0°, 10°, …, 90°.
    Table1(Table1Args),
    /// Spin-½ bounds over a grid of angles between the measurement axes.
    Sweep(SweepArgs),
    /// Randomized property suite.
    Verify(VerifyArgs),
    /// Monte Carlo sampling of a measurement chain.
    Simulate(SimulateArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Context {
        log_base: cli.log_base,
        seed: cli.seed,
        format: cli.format,
        quiet: cli.quiet,
    };
    let started = Instant::now();
    let result = match &cli.command {
        Command::Bounds(args) => commands::bounds::run(args, &ctx),
        Command::Table1(args) => commands::curves::run_table1(args, &ctx),
        Command::Sweep(args) => commands::curves::run_sweep(args, &ctx),
        Command::Verify(args) => commands::verify::run(args, &ctx),
        Command::Simulate(args) => commands::simulate::run(args, &ctx),
    };
    match result {
        Ok((text, code)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(error::exit::BAD_INPUT);
            }
            if !ctx.quiet {
                eprintln!("elapsed {:.3} s", started.elapsed().as_secs_f64());
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
