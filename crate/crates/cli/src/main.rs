use clap::{Args, Parser, Subcommand, ValueEnum};
use floquet_qc::{cmd_lyapunov, cmd_scan, cmd_spectrum, cmd_validate, cmd_winding, CliError, Outcome, OutputFormat, Request};
use std::path::PathBuf;
use std::process::ExitCode;

/// Spectra, phase diagrams, winding numbers and Floquet checks for driven
/// non-Hermitian quasicrystal chains.
#[derive(Parser)]
#[command(name = "floquet-qc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues, IPRs and summary statistics of the effective Hamiltonian.
    Spectrum {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Two-parameter sweep writing grid.csv, grid.json and optional heatmaps.
    Scan {
        #[command(flatten)]
        io: IoArgs,
        /// Render heatmap_<quantity>.svg for each configured quantity.
        #[arg(long)]
        svg: bool,
        /// Worker threads (default: all available cores).
        #[arg(long, env = floquet_qc::WORKERS_ENV)]
        workers: Option<usize>,
    },
    /// Spectral winding number(s) over the boundary-twist loop.
    Winding {
        #[command(flatten)]
        io: IoArgs,
        /// Real part of the base energy (M1–M3).
        #[arg(long, allow_hyphen_values = true)]
        base_re: Option<f64>,
        /// Imaginary part of the base energy (M1–M3).
        #[arg(long, allow_hyphen_values = true)]
        base_im: Option<f64>,
    },
    /// Compare one-period time evolution with the effective Hamiltonian.
    Validate {
        #[command(flatten)]
        io: IoArgs,
        /// Time steps per period (default: smallest stable count).
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Closed-form and transfer-matrix Lyapunov exponents.
    Lyapunov {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, allow_hyphen_values = true)]
        energy_re: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        energy_im: Option<f64>,
    },
}

#[derive(Args)]
struct IoArgs {
    /// Configuration file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output file, or output directory for `scan`.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl IoArgs {
    fn request(&self) -> Request {
        Request { config_path: self.config.clone(), out: self.out.clone() }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Spectrum { io, format } => cmd_spectrum(&io.request(), format.into()),
        Command::Scan { io, svg, workers } => {
            let workers = workers
                .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
            if workers == 0 {
                return Err(CliError::Config("--workers must be at least 1".into()));
            }
            cmd_scan(&io.request(), svg, workers)
        }
        Command::Winding { io, base_re, base_im } => cmd_winding(&io.request(), base_re, base_im),
        Command::Validate { io, steps } => cmd_validate(&io.request(), steps),
        Command::Lyapunov { io, format, energy_re, energy_im } => {
            cmd_lyapunov(&io.request(), format.into(), (energy_re, energy_im))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(outcome) => {
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            for path in &outcome.outputs {
                eprintln!("wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
