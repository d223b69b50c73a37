use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

mod bounds;
mod input;
mod moments;
mod oracle;
mod paths;
mod simulate;
mod verify;

/// A computation declined by a documented size rule rather than a failure.
#[derive(Debug)]
pub struct Refused(pub String);

impl std::fmt::Display for Refused {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Refused {}

/// Exact and estimated cluster-size moments for bond percolation on the
/// Platonic solids and other small regular graphs.
#[derive(Parser, Debug)]
#[command(name = "platoperc", version)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "PLATOPERC_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Moment polynomials by inclusion-exclusion over self-avoiding paths.
    Moments(moments::MomentsArgs),
    /// Moment polynomials by enumerating every edge configuration.
    Oracle(oracle::OracleArgs),
    /// Branching-process and large-p upper bounds, with exact values when cheap.
    Bounds(bounds::BoundsArgs),
    /// Monte Carlo estimates of E(S) and E(S^2).
    Simulate(simulate::SimulateArgs),
    /// Self-avoiding paths between two vertices, or minimal pair events.
    Paths(paths::PathsArgs),
    /// Reproduce the reference coefficient vectors and cross-check them.
    Verify(verify::VerifyArgs),
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()?;
    }
    match &cli.command {
        Command::Moments(args) => moments::run(args)?,
        Command::Oracle(args) => oracle::run(args)?,
        Command::Bounds(args) => bounds::run(args)?,
        Command::Simulate(args) => simulate::run(args)?,
        Command::Paths(args) => paths::run(args)?,
        Command::Verify(args) => {
            let (text, failed) = verify::table(args);
            input::emit(None, &text)?;
            return Ok(failed == 0);
        }
    }
    Ok(true)
}

fn is_refusal(err: &anyhow::Error) -> bool {
    err.chain().any(|cause| {
        cause.is::<Refused>()
            || matches!(
                cause.downcast_ref::<percolation_core::Error>(),
                Some(
                    percolation_core::Error::BudgetExceeded { .. }
                        | percolation_core::Error::TooManyEdges { .. }
                        | percolation_core::Error::FamilyTooLarge { .. }
                )
            )
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err:#}");
            if is_refusal(&err) {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
