//! `fsg`: evaluate formulas, compare models, synthesize separating formulas,
//! solve and play formula-size games, and reproduce the succinctness
//! experiments.

mod commands;
mod error;
mod input;
mod interactive;
mod play;
mod render;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fsg::exec::Exec;

use crate::error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "fsg", version, about = "Formula-size games for modal logic and the modal mu-calculus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Truth value and denotation of a formula in a model.
    Eval(commands::EvalArgs),
    /// Bounded or full bisimilarity of two pointed models.
    Bisim(commands::BisimArgs),
    /// Smallest modal formula separating two sets of models.
    Synth(commands::SynthArgs),
    /// Decide the modal formula-size game.
    SolveMl(commands::SolveArgs),
    /// Play the modal formula-size game.
    PlayMl(play::PlayMlArgs),
    /// Play the fixed-point formula-size game.
    PlayMu(play::PlayMuArgs),
    /// Reproduce an experiment suite as a report.
    Experiment(commands::ExperimentArgs),
    /// Chromatic number of a graph file.
    Chroma(commands::ChromaArgs),
}

/// Worker count from `FSG_WORKERS`: 1 runs everything on the calling thread.
fn configure_workers() -> CliResult<Exec> {
    let Ok(raw) = std::env::var("FSG_WORKERS") else {
        return Ok(Exec::default());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| CliError::Usage(format!("FSG_WORKERS must be a positive integer, got `{raw}`")))?;
    if n == 1 {
        return Ok(Exec::Sequential);
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(Exec::default())
}

fn run(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    let exec = configure_workers()?;
    match &cli.command {
        Command::Eval(a) => commands::eval(a, out),
        Command::Bisim(a) => commands::bisim(a, out),
        Command::Synth(a) => commands::synth(a, exec, out),
        Command::SolveMl(a) => commands::solve_ml(a, exec, out),
        Command::PlayMl(a) => play::play_ml(a, exec, out),
        Command::PlayMu(a) => play::play_mu(a, exec, out),
        Command::Experiment(a) => commands::experiment(a, exec, out),
        Command::Chroma(a) => commands::chroma(a, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = run(&cli, &mut out).and_then(|()| out.flush().map_err(CliError::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
