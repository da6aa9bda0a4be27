//! Library side of the `memsim` command: configuration, the simulation
//! pipeline, and the files each command writes.

pub mod config;
pub mod output;
pub mod presets;
pub mod run;
pub mod svg;

use std::path::{Path, PathBuf};

use memsim_core::{classify_loop, steady_loop, Classification, Loop, Series, Tolerances};
use thiserror::Error;

pub use config::{DeviceSpec, Plane, RawConfig, RunConfig};
pub use run::{simulate, sweep, Outcome, PeakReport, SweepRow};

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad configuration, arguments or input files.
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Model(#[from] memsim_core::Error),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    /// 2 for input errors, 3 when the numerics fail on valid input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::input(format!("{}: {e}", dir.display())))
}

/// Runs a configuration and writes `timeseries.csv`, `loop.csv`,
/// `report.txt` and, if requested, `loop.svg` into `out_dir`.
pub fn cmd_simulate(source: &str, out_dir: &Path, svg: bool) -> Result<(RunConfig, Outcome), CliError> {
    let cfg = RawConfig::load(source)?.interpret()?;
    let outcome = simulate(&cfg)?;
    ensure_dir(out_dir)?;
    output::write_timeseries(&out_dir.join("timeseries.csv"), &outcome.series)?;
    output::write_loop(&out_dir.join("loop.csv"), &outcome.steady)?;
    output::write_text(&out_dir.join("report.txt"), &output::report(&cfg, &outcome))?;
    if svg || cfg.svg {
        let (u, y) = output::axis_labels(&cfg);
        let title = format!("{}: {}", cfg.device.name(), outcome.classification.verdict);
        output::write_text(&out_dir.join("loop.svg"), &svg::loop_svg(&outcome.steady, u, y, &title))?;
    }
    Ok((cfg, outcome))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifyArgs {
    pub csv: PathBuf,
    pub u_col: String,
    pub y_col: String,
    pub t_col: String,
    /// With a period, the file is a time series and its last period is
    /// classified; without, the rows are one loop.
    pub period: Option<f64>,
    pub steady_tol: f64,
    pub tolerances: Tolerances,
}

impl ClassifyArgs {
    pub fn new(csv: impl Into<PathBuf>) -> Self {
        Self {
            csv: csv.into(),
            u_col: "u".into(),
            y_col: "y".into(),
            t_col: "t".into(),
            period: None,
            steady_tol: 1e-3,
            tolerances: Tolerances::default(),
        }
    }
}

fn data_err(e: memsim_core::Error) -> CliError {
    CliError::input(e.to_string())
}

/// Classifies a loop read from CSV; returns the classification and the text
/// printed by the command.
pub fn cmd_classify(args: &ClassifyArgs) -> Result<(Classification, String), CliError> {
    let lp = match args.period {
        Some(period) => {
            let cols = read(&args.csv, &[&args.t_col, &args.u_col, &args.y_col])?;
            let mut it = cols.into_iter();
            let (t, u, y) = (it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
            let ts = Series::from_columns(t, u, y).map_err(data_err)?;
            steady_loop(&ts, period, args.steady_tol).map_err(data_err)?
        }
        None => {
            let cols = read(&args.csv, &[&args.u_col, &args.y_col])?;
            Loop::closing(cols[0].iter().copied().zip(cols[1].iter().copied()).collect())
        }
    };
    let c = classify_loop(&lp, &args.tolerances).map_err(data_err)?;
    let text = format!(
        "{}\n{}",
        output::classification_text(&c),
        output::classification_block(&c)
    );
    Ok((c, text))
}

fn read(path: &Path, names: &[&str]) -> Result<Vec<Vec<f64>>, CliError> {
    output::read_columns(path, names)
}

/// Sweeps one configuration key and writes `summary.csv`; returns the rows
/// and the CSV text.
pub fn cmd_sweep(
    source: &str,
    param: &str,
    values: &[String],
    out_dir: &Path,
) -> Result<(Vec<SweepRow>, String), CliError> {
    let raw = RawConfig::load(source)?;
    raw.interpret()?;
    let rows = sweep(&raw, param, values)?;
    let text = output::summary_csv(param, &rows);
    ensure_dir(out_dir)?;
    output::write_text(&out_dir.join("summary.csv"), &text)?;
    Ok((rows, text))
}
