use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use slowlight_gyro::cli::{self, Command, ConfigFile, Format};

/// Slow-light Sagnac gyroscope calculations.
#[derive(Parser)]
#[command(name = "slgyro", version)]
struct Args {
    #[command(subcommand)]
    command: Cmd,
    /// JSON configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,
    /// Grid points for the propagation integrals.
    #[arg(long, global = true)]
    grid: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Steady-state density matrix of the Λ system.
    SteadyState,
    /// Weak-field and all-order propagation of both beams.
    Propagate,
    /// Signal phase with its light and matter parts.
    Phase,
    /// SNR against probe Rabi frequency.
    SnrSweep,
    /// Optimal saturation and ξ for each loss parameter.
    Optimize,
    /// Minimum detectable rotation rate.
    OmegaMin {
        /// Reference geometry: gupta or arnold.
        #[arg(long)]
        case: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

fn execute(args: Args) -> slowlight_gyro::Result<()> {
    let mut file = match &args.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    if args.grid.is_some() {
        file.grid_n_points = args.grid;
    }
    let command = match args.command {
        Cmd::SteadyState => Command::SteadyState,
        Cmd::Propagate => Command::Propagate,
        Cmd::Phase => Command::Phase,
        Cmd::SnrSweep => Command::SnrSweep,
        Cmd::Optimize => Command::Optimize,
        Cmd::OmegaMin { case } => {
            if case.is_some() {
                file.case_name = case;
            }
            Command::OmegaMin
        }
    };
    let format = match args.format {
        OutFormat::Csv => Format::Csv,
        OutFormat::Json => Format::Json,
    };
    let report = cli::run(command, &file)?;
    for w in &report.envelope.warnings {
        eprintln!("warning: {w}");
    }
    let text = report.render(format)?;
    match &args.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 1 } else { 2 })
        }
    }
}
