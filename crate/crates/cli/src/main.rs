//! `parrep`: solve strategy SDPs, check repetition witnesses, run the hedging
//! demonstration and plan error reduction.
//!
//! Exit codes: 0 success, 1 bad input, 2 negative answer (infeasible witness,
//! refused construction, failed threshold condition), 3 numerical failure.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use parrep::sdp::SolverOptions;

use commands::{CertifyArgs, Construction, Objective};
use report::{Failure, Outcome};

#[derive(Parser, Debug)]
#[command(name = "parrep", version, about = "Strategy SDPs and parallel-repetition certificates")]
struct Cli {
    /// Solver tolerance; also the feasibility tolerance for `certify`.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 200)]
    max_iter: usize,
    /// Report path (for `plot-entropy`, the CSV path).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Do not print the report to stdout.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Optimize a game objective.
    Solve {
        #[arg(long)]
        game: PathBuf,
        /// `win`, `value:v0,v1,…` or `threshold:n,k`.
        #[arg(long, default_value = "win")]
        objective: Objective,
        /// Repetitions for a `value:` objective.
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Also write the extracted dual witness here.
        #[arg(long)]
        emit_witness: Option<PathBuf>,
    },
    /// Check a dual witness, read from a file or built by a named construction.
    Certify {
        #[arg(long)]
        game: PathBuf,
        #[arg(long, conflicts_with = "construction", required_unless_present = "construction")]
        witness: Option<PathBuf>,
        #[arg(long, value_enum)]
        construction: Option<Construction>,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Outcome values for the `average` construction.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
        #[arg(long)]
        emit_witness: Option<PathBuf>,
    },
    /// Reproduce the two-round hedging counterexample.
    HedgingDemo,
    /// Size a threshold-repetition protocol for target error epsilon.
    ErrorReduction {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        epsilon: f64,
    },
    /// Sample 2^(-H(x)/x) as CSV.
    PlotEntropy {
        #[arg(long, default_value_t = 0.01)]
        min: f64,
        #[arg(long, default_value_t = 1.0)]
        max: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let opts = SolverOptions {
        tol: cli.tol,
        max_iter: cli.max_iter,
    };
    if !(1e-10..=1e-2).contains(&cli.tol) {
        return Err(Failure::Input(format!("--tol {:e} outside [1e-10, 1e-2]", cli.tol)));
    }
    match &cli.command {
        Command::Solve {
            game,
            objective,
            n,
            emit_witness,
        } => commands::solve(game, objective, *n, &opts, emit_witness.as_ref()),
        Command::Certify {
            game,
            witness,
            construction,
            n,
            k,
            values,
            emit_witness,
        } => commands::certify(
            &CertifyArgs {
                game,
                witness: witness.as_deref(),
                construction: *construction,
                n: *n,
                k: *k,
                values: values.clone(),
                emit_witness: emit_witness.as_deref(),
            },
            &opts,
        ),
        Command::HedgingDemo => commands::hedging_demo(&opts),
        Command::ErrorReduction { alpha, beta, epsilon } => commands::error_reduction(*alpha, *beta, *epsilon),
        Command::PlotEntropy { min, max, step } => commands::plot_entropy(*min, *max, *step, cli.out.as_deref()),
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors; here that code means a negative answer
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let text = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
            let is_csv = matches!(cli.command, Command::PlotEntropy { .. });
            if let (Some(path), false) = (&cli.out, is_csv) {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            // with no --out the CSV already went to stdout
            if !cli.quiet && !(is_csv && cli.out.is_none()) {
                // a closed pipe downstream is not an error of ours
                let _ = writeln!(std::io::stdout().lock(), "{text}");
            }
            ExitCode::from(outcome.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
