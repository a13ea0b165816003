use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use runrules::report::ShiftGrid;
use runrules::rules::DEFAULT_WE_RUN_LENGTH;
use runrules::{parse_scheme, Scheme};

mod commands;
mod output;

use commands::{parse_stat, with_run_length, CliError, CliResult, Stat};
use output::Format;

/// Exact run-length analysis for Shewhart charts with runs rules.
#[derive(Debug, Parser)]
#[command(name = "runrules", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output layout.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SchemeArgs {
    /// `r/m`, `M-r/m` or `C1234`.
    #[arg(long, value_parser = scheme_arg)]
    scheme: Scheme,
    /// Same-side run length for the Western Electric run rule.
    #[arg(long, default_value_t = DEFAULT_WE_RUN_LENGTH as u16, value_parser = clap::value_parser!(u16).range(8..=9))]
    we_run_length: u16,
}

impl SchemeArgs {
    fn resolve(&self) -> CliResult<Scheme> {
        with_run_length(self.scheme, self.we_run_length as usize)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Finds the limit that gives the target in-control ARL.
    Calibrate {
        #[arg(long, value_parser = scheme_arg)]
        scheme: Scheme,
        /// Target in-control ARL.
        #[arg(long)]
        arl0: f64,
        /// Relative tolerance on the achieved ARL.
        #[arg(long, default_value_t = runrules::calibrate::DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluates run-length statistics over a grid of shifts.
    Evaluate {
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Limit half-width in sigma units (defaults to 3 for C1234).
        #[arg(long)]
        limit: Option<f64>,
        /// Comma-separated values and `start:stop:step` ranges.
        #[arg(long, allow_hyphen_values = true, value_parser = grid_arg)]
        shifts: ShiftGrid,
        /// Any of arl, sd, percentiles, p5, p25, p50, p75, p95, sir.
        #[arg(long, value_delimiter = ',', default_value = "arl,sd", value_parser = parse_stat)]
        stats: Vec<Vec<Stat>>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Recomputes one of the reference tables (1 to 5).
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=5))]
        id: u8,
        #[arg(long, default_value_t = DEFAULT_WE_RUN_LENGTH as u16, value_parser = clap::value_parser!(u16).range(8..=9))]
        we_run_length: u16,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Monte Carlo estimate set against the exact values.
    Simulate {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long)]
        limit: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        shift: f64,
        /// Number of replications (at least 1000).
        #[arg(long)]
        reps: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn scheme_arg(text: &str) -> Result<Scheme, String> {
    parse_scheme(text).map_err(|e| e.to_string())
}

fn grid_arg(text: &str) -> Result<ShiftGrid, String> {
    text.parse().map_err(|e: runrules::Error| e.to_string())
}

fn run(command: Command) -> CliResult<(String, OutputArgs)> {
    Ok(match command {
        Command::Calibrate {
            scheme,
            arl0,
            tol,
            output,
        } => (
            commands::calibrate(scheme, arl0, tol, output.format)?,
            output,
        ),
        Command::Evaluate {
            scheme,
            limit,
            shifts,
            stats,
            output,
        } => {
            let stats: Vec<Stat> = stats.into_iter().flatten().collect();
            let text =
                commands::evaluate(scheme.resolve()?, limit, &shifts, &stats, output.format)?;
            (text, output)
        }
        Command::Table {
            id,
            we_run_length,
            output,
        } => (
            commands::table(id, we_run_length as usize, output.format)?,
            output,
        ),
        Command::Simulate {
            scheme,
            limit,
            shift,
            reps,
            seed,
            output,
        } => {
            let text =
                commands::simulate(scheme.resolve()?, limit, shift, reps, seed, output.format)?;
            (text, output)
        }
    })
}

fn emit(text: &str, out: Option<PathBuf>) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(&path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli.command).and_then(|(text, output)| emit(&text, output.out)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
