//! Simulation pipeline shared by the `simulate` and `sweep` commands.

use memsim_core::{
    classify_loop, integrate, limit_scan, numeric_current, simulate_series_circuit, steady_loop,
    switching_peaks, Classification, ElementKind, Loop, Peak, Scan, Series, SeriesCircuit,
};

use crate::config::{Plane, RawConfig, RunConfig};
use crate::CliError;

/// Samples per period used when an adaptive run must be put on a uniform
/// grid before differentiation.
const RESAMPLE_PER_PERIOD: usize = 2048;

/// Dominant current excursions over the last period.
#[derive(Clone, Debug, PartialEq)]
pub struct PeakReport {
    pub peaks: Vec<Peak<f64>>,
    pub median_abs: f64,
    pub max_abs: f64,
    pub factor: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    /// Raw trajectory: `u` is the element input (device voltage in the series
    /// circuit), `y` its response.
    pub series: Series,
    /// `dq/dt` for memcapacitive devices.
    pub current: Option<Series>,
    pub steady: Loop,
    pub classification: Classification,
    pub scan: Option<Scan>,
    pub peaks: Option<PeakReport>,
    /// Worst relative series-loop voltage residual.
    pub kirchhoff: Option<f64>,
}

pub fn simulate(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let element = cfg.device.build()?;
    let (series, kirchhoff) = match cfg.c_std {
        Some(c) => {
            let ckt = SeriesCircuit::new(c, element.as_ref(), cfg.drive)?;
            let ts = simulate_series_circuit(&ckt, &cfg.integrator)?;
            let k = ckt.kirchhoff_residual(&ts);
            (ts, Some(k))
        }
        None => (integrate(element.as_ref(), &cfg.drive, &cfg.integrator)?, None),
    };
    let period = cfg.drive.period();

    let current = if element.kind() == ElementKind::Memcapacitive {
        let uniform = if series.uniform_step().is_some() {
            series.clone()
        } else {
            series.resample_uniform(cfg.integrator.n_periods * RESAMPLE_PER_PERIOD + 1)?
        };
        Some(numeric_current(&uniform, cfg.smoothing)?)
    } else {
        None
    };

    let source = match (cfg.plane, &current) {
        (Plane::Current, Some(cur)) => cur,
        _ => &series,
    };
    let steady = steady_loop(source, period, cfg.integrator.steady_tol)?;
    let classification = classify_loop(&steady, &cfg.tolerances)?;

    let scan = if cfg.scan_decades >= 2 {
        Some(limit_scan(element.as_ref(), &cfg.drive, cfg.scan_decades, &cfg.integrator)?)
    } else {
        None
    };

    let peaks = current.as_ref().map(|cur| {
        let last: Vec<f64> = last_period(cur, period).iter().map(|&k| cur.y[k]).collect();
        let mut mags: Vec<f64> = last.iter().map(|v| v.abs()).collect();
        mags.sort_by(f64::total_cmp);
        let n = mags.len();
        let median_abs = if n % 2 == 1 { mags[n / 2] } else { 0.5 * (mags[n / 2 - 1] + mags[n / 2]) };
        PeakReport {
            peaks: switching_peaks(&last, cfg.peak_factor),
            median_abs,
            max_abs: mags[n - 1],
            factor: cfg.peak_factor,
        }
    });

    Ok(Outcome {
        series,
        current,
        steady,
        classification,
        scan,
        peaks,
        kirchhoff,
    })
}

/// Indices of the samples in `[t_end - period, t_end)`.
pub fn last_period(ts: &Series, period: f64) -> Vec<usize> {
    let t_end = *ts.t.last().expect("series is non-empty");
    let h = ts.duration() / (ts.len() - 1) as f64;
    let start = t_end - period - 0.5 * h;
    let stop = t_end - 0.5 * h;
    (0..ts.len()).filter(|&k| ts.t[k] >= start && ts.t[k] < stop).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub value: String,
    pub classification: Classification,
    pub exponent: Option<f64>,
}

/// Runs `base` once per value of `param`, concurrently, keeping input order.
pub fn sweep(base: &RawConfig, param: &str, values: &[String]) -> Result<Vec<SweepRow>, CliError> {
    if values.len() < 2 {
        return Err(CliError::input("sweep needs at least 2 values"));
    }
    let configs = values
        .iter()
        .map(|v| {
            let mut raw = base.clone();
            raw.set(param, v);
            raw.interpret()
                .map_err(|e| CliError::input(format!("--param {param} = {v}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let results: Vec<Result<Outcome, CliError>> = std::thread::scope(|s| {
        let handles: Vec<_> = configs.iter().map(|c| s.spawn(move || simulate(c))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    values
        .iter()
        .zip(results)
        .map(|(v, r)| {
            let o = r?;
            Ok(SweepRow {
                value: v.clone(),
                exponent: o.scan.map(|s| s.exponent),
                classification: o.classification,
            })
        })
        .collect()
}
