use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use memsim::{cmd_classify, cmd_simulate, cmd_sweep, presets, output, ClassifyArgs, CliError};
use memsim_core::Tolerances;

/// Simulate memory elements and classify their hysteresis loops.
#[derive(Parser, Debug)]
#[command(name = "memsim", version)]
struct Cli {
    /// Directory for output files.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Also write loop.svg.
    #[arg(long, global = true)]
    svg: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a configuration file or preset.
    Simulate {
        /// Path to a `key = value` file, or a preset name.
        config: String,
    },
    /// Classify a loop stored in a CSV file.
    Classify {
        csv: PathBuf,
        #[arg(long, default_value = "u")]
        u_col: String,
        #[arg(long, default_value = "y")]
        y_col: String,
        #[arg(long, default_value = "t")]
        t_col: String,
        /// Treat the file as a time series with this period (s) and use its
        /// last period.
        #[arg(long)]
        period: Option<f64>,
        #[arg(long, default_value_t = 1e-3)]
        steady_tol: f64,
        #[arg(long, default_value_t = 0.02)]
        gap_tol: f64,
        #[arg(long, default_value_t = 0.05)]
        slope_tol: f64,
        #[arg(long, default_value_t = 1e-4)]
        area_tol: f64,
    },
    /// Run a configuration once per value of one key.
    Sweep {
        config: String,
        /// Configuration key to vary, e.g. drive.amplitude.
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        values: Vec<String>,
    },
    /// List presets, or print one.
    Presets { name: Option<String> },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate { config } => {
            let (cfg, outcome) = cmd_simulate(&config, &cli.out_dir, cli.svg)?;
            print!("{}", output::classification_text(&outcome.classification));
            if let Some(scan) = &outcome.scan {
                println!("  divergence exponent {:.4}", scan.exponent);
            }
            if let Some(p) = &outcome.peaks {
                println!("  {} current peak(s) above {} x median", p.peaks.len(), p.factor);
            }
            eprintln!("wrote {} outputs to {}", cfg.device.name(), cli.out_dir.display());
        }
        Command::Classify {
            csv,
            u_col,
            y_col,
            t_col,
            period,
            steady_tol,
            gap_tol,
            slope_tol,
            area_tol,
        } => {
            let args = ClassifyArgs {
                csv,
                u_col,
                y_col,
                t_col,
                period,
                steady_tol,
                tolerances: Tolerances { gap_tol, slope_tol, area_tol },
            };
            let (_, text) = cmd_classify(&args)?;
            print!("{text}");
        }
        Command::Sweep { config, param, values } => {
            let (_, text) = cmd_sweep(&config, &param, &values, &cli.out_dir)?;
            print!("{text}");
        }
        Command::Presets { name: None } => {
            for n in presets::names() {
                println!("{n}");
            }
        }
        Command::Presets { name: Some(n) } => match presets::get(&n) {
            Some(text) => print!("{text}"),
            None => return Err(CliError::input(format!("no preset `{n}`"))),
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("memsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
