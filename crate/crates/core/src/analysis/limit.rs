use super::HysteresisLoop;
use crate::error::{invalid, Error, Result};
use crate::integrator::{integrate, steady_loop, IntegratorConfig};
use crate::models::MemElement;
use crate::scalar::{lit, Scalar};
use crate::waveform::DriveWaveform;

const AMPLITUDES_PER_DECADE: usize = 3;
const SAMPLES_PER_AMPLITUDE: usize = 4;

/// Samples taken from one steady loop of the scan.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanPoint<T> {
    pub amplitude: T,
    /// Largest `|y|` on the steady loop.
    pub max_abs_y: T,
    /// The `|u|` values nearest zero that entered the fit.
    pub u: Vec<T>,
    /// `|y / u|` at those samples.
    pub ratio: Vec<T>,
}

/// Power-law fit of the small-signal ratio `|y/u|` against `|u|`.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitScan<T> {
    /// Slope of `ln|y/u|` against `ln|u|`: `-1/2` when the ratio diverges as
    /// `|u|^(-1/2)`, `0` for a constant ratio.
    pub exponent: T,
    pub intercept: T,
    /// Coefficient of determination of the fit.
    pub r_squared: T,
    pub points: Vec<ScanPoint<T>>,
    /// Whether `max|y|` decreases strictly as the amplitude decreases, i.e.
    /// the response vanishes with the drive.
    pub response_vanishes: bool,
}

/// Sweeps the drive amplitude `decades` decades down from `drive.amplitude`
/// (three amplitudes per decade) and fits the divergence exponent of the
/// memory resistance or conductance near zero drive.
pub fn limit_scan<T: Scalar>(
    element: &dyn MemElement<T>,
    drive: &DriveWaveform<T>,
    decades: usize,
    cfg: &IntegratorConfig<T>,
) -> Result<LimitScan<T>> {
    if !element.kind().is_memristive() {
        return Err(Error::WrongKind {
            expected: "memristive",
            found: element.kind(),
        });
    }
    if decades < 2 {
        return Err(invalid("decades", "must be at least 2"));
    }
    if !(drive.amplitude > T::zero()) {
        return Err(invalid("amplitude", "nominal amplitude must be > 0"));
    }
    let steps = decades * AMPLITUDES_PER_DECADE;
    let mut points = Vec::with_capacity(steps + 1);
    for j in 0..=steps {
        let scale = lit::<T>(10.0).powf(-lit::<T>(j as f64) / lit(AMPLITUDES_PER_DECADE as f64));
        let d = drive.with_amplitude(drive.amplitude * scale);
        let ts = integrate(element, &d, cfg)?;
        let lp = steady_loop(&ts, d.period(), cfg.steady_tol)?;
        points.push(scan_point(&lp, d.amplitude));
    }
    let (xs, ys): (Vec<T>, Vec<T>) = points
        .iter()
        .flat_map(|p| p.u.iter().zip(&p.ratio).map(|(&u, &r)| (u.ln(), r.ln())))
        .unzip();
    if xs.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            found: xs.len(),
        });
    }
    let (exponent, intercept, r_squared) = linear_fit(&xs, &ys);
    let response_vanishes = points.windows(2).all(|w| w[1].max_abs_y < w[0].max_abs_y);
    Ok(LimitScan {
        exponent,
        intercept,
        r_squared,
        points,
        response_vanishes,
    })
}

fn scan_point<T: Scalar>(lp: &HysteresisLoop<T>, amplitude: T) -> ScanPoint<T> {
    let floor = lit::<T>(1e-9) * lp.u_scale;
    let mut near: Vec<(T, T)> = lp
        .vertices()
        .iter()
        .filter(|(u, y)| u.abs() > floor && *y != T::zero())
        .map(|&(u, y)| (u.abs(), (y / u).abs()))
        .collect();
    near.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    near.truncate(SAMPLES_PER_AMPLITUDE);
    ScanPoint {
        amplitude,
        max_abs_y: lp.y_scale,
        u: near.iter().map(|p| p.0).collect(),
        ratio: near.iter().map(|p| p.1).collect(),
    }
}

/// Ordinary least squares `y = a x + b`; returns `(a, b, r^2)`.
pub(crate) fn linear_fit<T: Scalar>(xs: &[T], ys: &[T]) -> (T, T, T) {
    let n = lit::<T>(xs.len() as f64);
    let mx = xs.iter().fold(T::zero(), |s, &x| s + x) / n;
    let my = ys.iter().fold(T::zero(), |s, &y| s + y) / n;
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&x, &y) in xs.iter().zip(ys) {
        sxy = sxy + (x - mx) * (y - my);
        sxx = sxx + (x - mx) * (x - mx);
        syy = syy + (y - my) * (y - my);
    }
    let a = sxy / sxx;
    let r2 = if syy > T::zero() {
        (sxy * sxy) / (sxx * syy)
    } else {
        T::one()
    };
    (a, my - a * mx, r2)
}
