//! Series capacitor measurement circuit.
//!
//! A voltage source drives a standard capacitor in series with a
//! memcapacitive device. Both carry the same charge, so the device charge is
//! read from the voltage across the standard capacitor:
//! `q = c_std * (v_src - v_d)`. At every stage time the device voltage `v_d`
//! is the root of `q_device(v_d, x) - c_std * (v_src - v_d) = 0`.

use crate::error::{invalid, Error, Result};
use crate::integrator::{integrate_dynamics, Dynamics, IntegratorConfig, SeriesMeta, TimeSeries};
use crate::models::{Bounds, ElementKind, MemElement, Quantity, Sweep};
use crate::roots::{newton_bisect, RootError};
use crate::scalar::{lit, to_f64, Scalar};
use crate::waveform::DriveWaveform;

const BRACKET_EXPANSIONS: usize = 4;
const MAX_ITER: usize = 200;

#[derive(Debug)]
pub struct SeriesCircuit<'a, T> {
    c_std: T,
    device: &'a dyn MemElement<T>,
    drive: DriveWaveform<T>,
}

impl<'a, T: Scalar> SeriesCircuit<'a, T> {
    pub fn new(c_std: T, device: &'a dyn MemElement<T>, drive: DriveWaveform<T>) -> Result<Self> {
        if !(c_std.is_finite() && c_std > T::zero()) {
            return Err(invalid("c_std", "must be finite and > 0"));
        }
        if device.kind() != ElementKind::Memcapacitive {
            return Err(Error::WrongKind {
                expected: "memcapacitive",
                found: device.kind(),
            });
        }
        if drive.quantity != Quantity::Voltage {
            return Err(Error::DriveMismatch {
                kind: device.kind(),
                drive: drive.quantity,
            });
        }
        drive.validate()?;
        device.check_state(&device.initial_state())?;
        Ok(Self {
            c_std,
            device,
            drive,
        })
    }

    pub fn c_std(&self) -> T {
        self.c_std
    }

    /// Peak source magnitude, or 1 for an idle source.
    fn voltage_scale(&self) -> T {
        let v = self.drive.peak();
        if v > T::zero() {
            v
        } else {
            T::one()
        }
    }

    /// Charge scale used to normalize the constraint residual.
    pub fn q_scale(&self) -> T {
        let a = self.drive.amplitude.abs();
        self.c_std * if a > T::zero() { a } else { self.voltage_scale() }
    }

    /// Solves the series constraint for the device voltage at time `t` with
    /// device state `x`.
    pub fn device_voltage(&self, t: T, x: &[T]) -> Result<T> {
        let v_src = self.drive.value(t);
        let c = self.c_std;
        let residual = |v: T| {
            (
                self.device.response(x, v) - c * (v_src - v),
                self.device.response_slope(x, v) + c,
            )
        };
        let mut span = lit::<T>(10.0) * self.voltage_scale();
        let mut bracketed = false;
        for _ in 0..=BRACKET_EXPANSIONS {
            let lo = residual(-span).0;
            let hi = residual(span).0;
            if lo <= T::zero() && hi >= T::zero() {
                bracketed = true;
                break;
            }
            span = span + span;
        }
        if !bracketed {
            return Err(Error::RootNotBracketed {
                t: to_f64(t),
                lo: to_f64(-span),
                hi: to_f64(span),
            });
        }
        // the divider estimate is exact for laws affine in v
        let (q0, s0) = (self.device.response(x, T::zero()), self.device.response_slope(x, T::zero()));
        let guess = (c * v_src - q0) / (c + s0);
        let tol = lit::<T>(1e-12).max(lit::<T>(64.0) * T::epsilon()) * self.q_scale();
        newton_bisect(residual, -span, span, guess, tol, MAX_ITER).map_err(|e| match e {
            RootError::NotBracketed { .. } => Error::RootNotBracketed {
                t: to_f64(t),
                lo: to_f64(-span),
                hi: to_f64(span),
            },
            RootError::Stalled { residual, .. } => Error::RootNotConverged {
                t: to_f64(t),
                residual: to_f64(residual),
            },
        })
    }

    /// Largest `|v_src - v_d - q / c_std|` over the series, relative to the
    /// largest `|v_src|`.
    pub fn kirchhoff_residual(&self, ts: &TimeSeries<T>) -> T {
        let mut worst = T::zero();
        let mut peak = T::zero();
        for ((&t, &v_d), &q) in ts.t.iter().zip(&ts.u).zip(&ts.y) {
            let v_src = self.drive.value(t);
            peak = peak.max(v_src.abs());
            worst = worst.max((v_src - v_d - q / self.c_std).abs());
        }
        if peak > T::zero() {
            worst / peak
        } else {
            worst
        }
    }
}

impl<T: Scalar> Dynamics<T> for SeriesCircuit<'_, T> {
    fn drive(&self) -> &DriveWaveform<T> {
        &self.drive
    }

    fn state_bounds(&self) -> Vec<Bounds<T>> {
        self.device.state_bounds()
    }

    fn initial_state(&self) -> Vec<T> {
        self.device.initial_state()
    }

    fn rate(&self, t: T, x: &[T], sweep: Sweep, dx: &mut [T]) -> Result<()> {
        let v_d = self.device_voltage(t, x)?;
        self.device.state_rate(x, v_d, sweep, dx);
        Ok(())
    }

    fn observe(&self, t: T, x: &[T]) -> Result<(T, T)> {
        let v_d = self.device_voltage(t, x)?;
        Ok((v_d, self.device.response(x, v_d)))
    }

    fn meta(&self) -> SeriesMeta<T> {
        SeriesMeta {
            kind: Some(self.device.kind()),
            drive: Some(self.drive),
            label: "series circuit: u = device voltage, y = charge".into(),
        }
    }
}

/// Runs the series circuit. The result has `u` = device voltage, `y` =
/// charge, `x` = device state.
pub fn simulate_series_circuit<T: Scalar>(
    ckt: &SeriesCircuit<'_, T>,
    cfg: &IntegratorConfig<T>,
) -> Result<TimeSeries<T>> {
    integrate_dynamics(ckt, cfg)
}

/// Differentiates the `y` column (a charge) to obtain current.
///
/// Central differences in the interior, one-sided at the ends, followed by a
/// centered moving average over `window` samples (`1` disables it). Requires
/// a uniform grid.
pub fn numeric_current<T: Scalar>(ts: &TimeSeries<T>, window: usize) -> Result<TimeSeries<T>> {
    let n = ts.len();
    if n < 3 {
        return Err(Error::TooFewPoints { needed: 3, found: n });
    }
    if window == 0 {
        return Err(invalid("window", "must be at least 1"));
    }
    let h = ts.uniform_step().ok_or(Error::NonUniformGrid)?;
    let q = &ts.y;
    let two_h = h + h;
    let mut i = Vec::with_capacity(n);
    i.push((q[1] - q[0]) / h);
    for k in 1..n - 1 {
        i.push((q[k + 1] - q[k - 1]) / two_h);
    }
    i.push((q[n - 1] - q[n - 2]) / h);
    if window > 1 {
        i = moving_average(&i, window);
    }
    let mut meta = ts.meta.clone();
    meta.label = "current".into();
    TimeSeries::new(ts.t.clone(), ts.u.clone(), i, ts.x.clone(), meta)
}

fn moving_average<T: Scalar>(v: &[T], window: usize) -> Vec<T> {
    let n = v.len();
    let left = (window - 1) / 2;
    let right = window - 1 - left;
    (0..n)
        .map(|k| {
            let a = k.saturating_sub(left);
            let b = (k + right).min(n - 1);
            let sum = v[a..=b].iter().fold(T::zero(), |s, &x| s + x);
            sum / lit((b - a + 1) as f64)
        })
        .collect()
}
