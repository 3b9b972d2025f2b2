use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use xxcorr_cli::commands::{self, ConstantsArgs, CorrelatorArgs, FiniteSizeArgs, Format, Outcome};
use xxcorr_cli::CliResult;

/// Equal-time spin correlators of the XX chain and their asymptotic constants.
#[derive(Debug, Parser)]
#[command(name = "xxcorr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the document here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate G(x) for 1 <= x <= x-max by several routes and compare them.
    Correlator {
        /// Ring length with L/2 odd, or `inf`.
        #[arg(long = "L")]
        lattice: String,
        #[arg(long)]
        x_max: usize,
        /// Comma-separated subset of det, product, ed, asym, asym2.
        #[arg(long, default_value = "det,product,asym")]
        routes: String,
        #[command(flatten)]
        output: Output,
    },
    /// Compute ln B four ways plus the derived amplitudes.
    Constants {
        #[arg(long, default_value_t = 10_000)]
        n_fit: usize,
        #[arg(long, default_value_t = 2000)]
        x_fit_max: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Compare the exact correlator at x = x-frac * L with the finite-ring
    /// asymptotic form.
    FiniteSize {
        /// Comma-separated ring lengths; each is raised to the next L with L/2 odd.
        #[arg(long = "L-list")]
        l_list: String,
        #[arg(long, default_value_t = 0.5)]
        x_frac: f64,
        #[command(flatten)]
        output: Output,
    },
}

fn emit(outcome: Outcome, out: Option<PathBuf>) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, &outcome.document)?,
        None => std::io::stdout().write_all(outcome.document.as_bytes())?,
    }
    eprint!("{}", outcome.diagnostics);
    match outcome.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Correlator { lattice, x_max, routes, output } => {
            let args = CorrelatorArgs { lattice, x_max, routes, format: output.format };
            emit(commands::correlator(&args)?, output.out)
        }
        Command::Constants { n_fit, x_fit_max, output } => {
            let args = ConstantsArgs { n_fit, x_fit_max, format: output.format };
            emit(commands::constants(&args)?, output.out)
        }
        Command::FiniteSize { l_list, x_frac, output } => {
            let args = FiniteSizeArgs { l_list, x_frac, format: output.format };
            emit(commands::finite_size(&args)?, output.out)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
