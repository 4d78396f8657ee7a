mod args;
mod commands;
mod config;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use bandframe::Error;
use commands::Status;
use config::{parse_window, RunConfig};

/// Environment variable capping the worker thread count.
const THREADS_VAR: &str = "BANDFRAME_THREADS";

fn init_threads() -> Result<(), Error> {
    let Ok(text) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidParameter(format!("{THREADS_VAR} must be a positive integer, got {text:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<Status, Error> {
    init_threads()?;
    match cli.command {
        Command::Analyze { family, out } => commands::analyze(&RunConfig::resolve(&family)?, out.as_deref()),
        Command::Duals {
            family,
            window,
            step,
            out,
            cross_validate,
        } => commands::duals(&RunConfig::resolve(&family)?, parse_window(&window)?, step, &out, cross_validate),
        Command::Reconstruct {
            family,
            signal,
            k,
            window,
            step,
            out,
        } => commands::reconstruct_cmd(
            &RunConfig::resolve(&family)?,
            signal.parse()?,
            k,
            parse_window(&window)?,
            step,
            out.as_deref(),
        ),
        Command::Reproduce { figure, out } => commands::reproduce(&figure, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Done) => ExitCode::SUCCESS,
        Ok(Status::NotFrame) => ExitCode::from(2),
        Err(e @ Error::NotFrame(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e @ Error::DegenerateRegime { .. }) => {
            eprintln!("error: {e}; the sampling period must satisfy h = 2 pi / t_o < 2 omega");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
