//! `qsw`: reproducible experiment runner for the walk library.
//!
//! Exit codes: 0 on success, 2 for usage and configuration errors, 3 when
//! the numerics fail (no convergence, invariant violations, degenerate
//! spectra).

mod commands;
mod output;
mod spec;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qsw::QswError;

#[derive(Parser)]
#[command(name = "qsw", version, about = "Quantum stochastic walks and quantum spatial search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample or build a graph and write it as graph JSON.
    Graphgen(commands::graphgen::Args),
    /// Second moments and scaling exponents of a walk on a path.
    Propagate(commands::propagate::Args),
    /// Spectral convergence classification of a walk generator.
    Converge(commands::converge::Args),
    /// Quantum spatial search for one marked vertex.
    Search(commands::search::Args),
    /// Multi-sample search experiments driven by a JSON config.
    Sweep(commands::sweep::Args),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let res = match cli.command {
        Command::Graphgen(a) => commands::graphgen::run(a),
        Command::Propagate(a) => commands::propagate::run(a),
        Command::Converge(a) => commands::converge::run(a),
        Command::Search(a) => commands::search::run(a),
        Command::Sweep(a) => commands::sweep::run(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &QswError) -> u8 {
    if e.is_numerical() {
        3
    } else {
        2
    }
}
