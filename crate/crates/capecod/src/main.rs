use std::io::Write;
use std::path::{Path, PathBuf};
use std::process;

use clap::{Parser, Subcommand, ValueEnum};

use capecod::cli::{self, OutputFormat};

#[derive(Parser)]
#[command(
    name = "capecod",
    version,
    about = "Chain-ladder, Cape Cod and generalized Cape Cod claims reserving \
             with closed-form prediction uncertainty"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(format: Format) -> Self {
        match format {
            Format::Text => OutputFormat::Text,
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Fit development factors, variance parameters, pattern and claims ratios
    Fit {
        #[arg(long)]
        triangle: PathBuf,
        #[arg(long)]
        premiums: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generalized Cape Cod reserves at one lambda
    Reserve {
        #[arg(long)]
        triangle: PathBuf,
        #[arg(long)]
        premiums: PathBuf,
        #[arg(long)]
        lambda: f64,
        /// Display scale for the human-readable column
        #[arg(long, default_value_t = 1000.0)]
        scale: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reserves, error split, RMSEP and CoVa across the lambda grid
    Sweep {
        #[arg(long)]
        triangle: PathBuf,
        #[arg(long)]
        premiums: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        grid_step: f64,
        /// Display scale used by the text format
        #[arg(long, default_value_t = 1000.0)]
        scale: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo calibration study from a key-value config file
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Override the seed from the config file
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn usage_error(msg: &str) -> ! {
    eprintln!("error: {msg}");
    process::exit(2);
}

fn emit(content: &str, out: Option<&Path>) -> capecod::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => {
            let stdout = std::io::stdout();
            stdout.lock().write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

fn run(command: Command) -> capecod::Result<()> {
    match command {
        Command::Fit {
            triangle,
            premiums,
            format,
            out,
        } => {
            let output = cli::cmd_fit(&triangle, &premiums, format.into())?;
            emit(&output, out.as_deref())
        }
        Command::Reserve {
            triangle,
            premiums,
            lambda,
            scale,
            out,
        } => {
            if !(0.0..=1.0).contains(&lambda) {
                usage_error(&format!("--lambda must lie in [0, 1], got {lambda}"));
            }
            if scale <= 0.0 || scale.is_nan() {
                usage_error(&format!("--scale must be positive, got {scale}"));
            }
            let output = cli::cmd_reserve(&triangle, &premiums, lambda, scale)?;
            emit(&output, out.as_deref())
        }
        Command::Sweep {
            triangle,
            premiums,
            grid_step,
            scale,
            format,
            out,
        } => {
            if capecod::report::lambda_grid(grid_step).is_err() {
                usage_error(&format!(
                    "--grid-step must lie in (0, 1] and divide the unit interval, got {grid_step}"
                ));
            }
            if scale <= 0.0 || scale.is_nan() {
                usage_error(&format!("--scale must be positive, got {scale}"));
            }
            let output = cli::cmd_sweep(&triangle, &premiums, grid_step, scale, format.into())?;
            emit(&output, out.as_deref())
        }
        Command::Simulate {
            config,
            seed,
            format,
            out,
        } => {
            let output = cli::cmd_simulate(&config, seed, format.into())?;
            emit(&output, out.as_deref())
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli.command) {
        eprintln!("error: {err}");
        process::exit(err.exit_code());
    }
}
