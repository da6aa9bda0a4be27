//! Time stepping of driven memory elements.
//!
//! Two explicit methods are available: classic fixed-step RK4 and the
//! Dormand-Prince 5(4) embedded pair with error control. Both evaluate the
//! drive analytically at every stage time. The adaptive method always lands
//! on triangle-wave corners and period boundaries, so no step straddles a
//! derivative discontinuity.
//!
//! State bounds are enforced as a clamped flow: stage states are clamped into
//! their bounds and any derivative component pointing outward from a
//! saturated bound is zeroed.

mod series;
mod steady;

pub use series::{SeriesMeta, TimeSeries};
pub use steady::{period_distance, steady_loop, steady_loop_with, DEFAULT_PHASE_POINTS};

use crate::error::{invalid, Error, Result};
use crate::models::{Bounds, MemElement, Sweep};
use crate::scalar::{lit, to_f64, Scalar};
use crate::waveform::DriveWaveform;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method<T> {
    /// Classic RK4. `dt` is shortened slightly when needed so that a whole
    /// number of steps spans the run.
    Rk4Fixed { dt: T },
    /// Dormand-Prince 5(4) with mixed absolute/relative error control.
    Rk45Adaptive { rtol: T, atol: T, dt_min: T, dt_max: T },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig<T> {
    pub method: Method<T>,
    /// Number of drive periods to simulate; at least 2.
    pub n_periods: usize,
    /// Relative period-to-period distance below which a loop is steady.
    pub steady_tol: T,
}

impl<T: Scalar> IntegratorConfig<T> {
    pub fn rk4(dt: T, n_periods: usize) -> Self {
        Self {
            method: Method::Rk4Fixed { dt },
            n_periods,
            steady_tol: lit(1e-3),
        }
    }

    /// RK4 with `steps_per_period` uniform steps per period of `drive`.
    pub fn rk4_per_period(drive: &DriveWaveform<T>, steps_per_period: usize, n_periods: usize) -> Self {
        Self::rk4(drive.period() / lit(steps_per_period as f64), n_periods)
    }

    pub fn adaptive(rtol: T, atol: T, dt_min: T, dt_max: T, n_periods: usize) -> Self {
        Self {
            method: Method::Rk45Adaptive {
                rtol,
                atol,
                dt_min,
                dt_max,
            },
            n_periods,
            steady_tol: lit(1e-3),
        }
    }

    pub fn with_steady_tol(mut self, tol: T) -> Self {
        self.steady_tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |name: &'static str, v: T| {
            if v.is_finite() && v > T::zero() {
                Ok(())
            } else {
                Err(invalid(name, format!("must be finite and > 0, got {v}")))
            }
        };
        match self.method {
            Method::Rk4Fixed { dt } => pos("dt", dt)?,
            Method::Rk45Adaptive {
                rtol,
                atol,
                dt_min,
                dt_max,
            } => {
                pos("rtol", rtol)?;
                pos("atol", atol)?;
                pos("dt_min", dt_min)?;
                pos("dt_max", dt_max)?;
                if dt_min > dt_max {
                    return Err(invalid("dt_min", "must not exceed dt_max"));
                }
            }
        }
        if self.n_periods < 2 {
            return Err(invalid("n_periods", "must be at least 2"));
        }
        pos("steady_tol", self.steady_tol)
    }
}

/// A driven system the integrator can advance: state equation plus an
/// observation map producing the `(u, y)` pair recorded at each sample.
pub trait Dynamics<T: Scalar> {
    fn drive(&self) -> &DriveWaveform<T>;
    fn state_bounds(&self) -> Vec<Bounds<T>>;
    fn initial_state(&self) -> Vec<T>;
    fn rate(&self, t: T, x: &[T], sweep: Sweep, dx: &mut [T]) -> Result<()>;
    fn observe(&self, t: T, x: &[T]) -> Result<(T, T)>;
    fn meta(&self) -> SeriesMeta<T>;
}

/// An element connected directly to an ideal source of its input quantity.
#[derive(Debug)]
pub struct DrivenElement<'a, T> {
    element: &'a dyn MemElement<T>,
    drive: DriveWaveform<T>,
}

impl<'a, T: Scalar> DrivenElement<'a, T> {
    pub fn new(element: &'a dyn MemElement<T>, drive: DriveWaveform<T>) -> Result<Self> {
        drive.validate()?;
        if element.kind().input() != drive.quantity {
            return Err(Error::DriveMismatch {
                kind: element.kind(),
                drive: drive.quantity,
            });
        }
        element.check_state(&element.initial_state())?;
        Ok(Self { element, drive })
    }
}

impl<T: Scalar> Dynamics<T> for DrivenElement<'_, T> {
    fn drive(&self) -> &DriveWaveform<T> {
        &self.drive
    }

    fn state_bounds(&self) -> Vec<Bounds<T>> {
        self.element.state_bounds()
    }

    fn initial_state(&self) -> Vec<T> {
        self.element.initial_state()
    }

    fn rate(&self, t: T, x: &[T], sweep: Sweep, dx: &mut [T]) -> Result<()> {
        self.element.state_rate(x, self.drive.value(t), sweep, dx);
        Ok(())
    }

    fn observe(&self, t: T, x: &[T]) -> Result<(T, T)> {
        let u = self.drive.value(t);
        Ok((u, self.element.response(x, u)))
    }

    fn meta(&self) -> SeriesMeta<T> {
        SeriesMeta {
            kind: Some(self.element.kind()),
            drive: Some(self.drive),
            label: format!("{:?}", self.element.kind()),
        }
    }
}

/// Simulates `element` under `drive` for `cfg.n_periods` periods.
pub fn integrate<T: Scalar>(
    element: &dyn MemElement<T>,
    drive: &DriveWaveform<T>,
    cfg: &IntegratorConfig<T>,
) -> Result<TimeSeries<T>> {
    let sys = DrivenElement::new(element, *drive)?;
    integrate_dynamics(&sys, cfg)
}

/// Simulates any [`Dynamics`] for `cfg.n_periods` periods of its drive.
pub fn integrate_dynamics<T: Scalar, D: Dynamics<T> + ?Sized>(
    sys: &D,
    cfg: &IntegratorConfig<T>,
) -> Result<TimeSeries<T>> {
    cfg.validate()?;
    sys.drive().validate()?;
    let mut run = Run::new(sys)?;
    let t_end = sys.drive().period() * lit(cfg.n_periods as f64);
    match cfg.method {
        Method::Rk4Fixed { dt } => run.fixed(t_end, dt)?,
        Method::Rk45Adaptive {
            rtol,
            atol,
            dt_min,
            dt_max,
        } => run.adaptive(t_end, rtol, atol, dt_min, dt_max)?,
    }
    TimeSeries::new(run.t, run.u, run.y, run.x, sys.meta())
}

const DP_C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Fifth-order weights minus the embedded fourth-order weights.
const DP_E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

struct Run<'s, T: Scalar, D: ?Sized> {
    sys: &'s D,
    bounds: Vec<Bounds<T>>,
    state: Vec<T>,
    sweep: Sweep,
    k: Vec<Vec<T>>,
    stage: Vec<T>,
    t: Vec<T>,
    u: Vec<T>,
    y: Vec<T>,
    x: Vec<Vec<T>>,
}

impl<'s, T: Scalar, D: Dynamics<T> + ?Sized> Run<'s, T, D> {
    fn new(sys: &'s D) -> Result<Self> {
        let bounds = sys.state_bounds();
        let state = sys.initial_state();
        if state.len() != bounds.len() {
            return Err(Error::StateDimension {
                expected: bounds.len(),
                found: state.len(),
            });
        }
        let n = state.len();
        let sweep = sys.drive().sweep(T::zero()).unwrap_or(Sweep::Rising);
        Ok(Self {
            sys,
            bounds,
            state,
            sweep,
            k: vec![vec![T::zero(); n]; 7],
            stage: vec![T::zero(); n],
            t: Vec::new(),
            u: Vec::new(),
            y: Vec::new(),
            x: Vec::new(),
        })
    }

    fn record(&mut self, t: T) -> Result<()> {
        if self.state.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { t: to_f64(t) });
        }
        let (u, y) = self.sys.observe(t, &self.state)?;
        self.t.push(t);
        self.u.push(u);
        self.y.push(y);
        self.x.push(self.state.clone());
        Ok(())
    }

    /// Direction for a step over `[t, t + h]`, read at the midpoint and held
    /// where the drive slope vanishes.
    fn update_sweep(&mut self, t: T, h: T) {
        if let Some(s) = self.sys.drive().sweep(t + h / lit(2.0)) {
            self.sweep = s;
        }
    }

    fn clamp(bounds: &[Bounds<T>], x: &mut [T]) {
        for (v, b) in x.iter_mut().zip(bounds) {
            *v = b.clamp(*v);
        }
    }

    /// Clamped flow at `(t, stage)` into `k[slot]`.
    fn flow(&mut self, t: T, slot: usize) -> Result<()> {
        Self::clamp(&self.bounds, &mut self.stage);
        let dx = &mut self.k[slot];
        self.sys.rate(t, &self.stage, self.sweep, dx)?;
        for ((d, &v), b) in dx.iter_mut().zip(&self.stage).zip(&self.bounds) {
            if (v <= b.lo && *d < T::zero()) || (v >= b.hi && *d > T::zero()) {
                *d = T::zero();
            }
        }
        Ok(())
    }

    fn set_stage(&mut self, h: T, coeffs: &[(usize, T)]) {
        for i in 0..self.state.len() {
            let mut acc = T::zero();
            for &(slot, a) in coeffs {
                acc = acc + a * self.k[slot][i];
            }
            self.stage[i] = self.state[i] + h * acc;
        }
    }

    fn rk4_step(&mut self, t: T, h: T) -> Result<()> {
        let half = lit::<T>(0.5);
        self.stage.copy_from_slice(&self.state);
        self.flow(t, 0)?;
        self.set_stage(h, &[(0, half)]);
        self.flow(t + h * half, 1)?;
        self.set_stage(h, &[(1, half)]);
        self.flow(t + h * half, 2)?;
        self.set_stage(h, &[(2, T::one())]);
        self.flow(t + h, 3)?;
        let sixth = T::one() / lit(6.0);
        let two = lit::<T>(2.0);
        for i in 0..self.state.len() {
            let k = &self.k;
            self.state[i] = self.state[i]
                + h * sixth * (k[0][i] + two * k[1][i] + two * k[2][i] + k[3][i]);
        }
        Self::clamp(&self.bounds, &mut self.state);
        Ok(())
    }

    fn fixed(&mut self, t_end: T, dt: T) -> Result<()> {
        let ratio = to_f64(t_end / dt);
        let steps = if (ratio - ratio.round()).abs() <= 1e-6 * ratio.max(1.0) {
            ratio.round()
        } else {
            ratio.ceil()
        }
        .max(1.0) as usize;
        let h = t_end / lit(steps as f64);
        self.record(T::zero())?;
        for n in 0..steps {
            let t = h * lit(n as f64);
            self.update_sweep(t, h);
            self.rk4_step(t, h)?;
            let t_next = if n + 1 == steps {
                t_end
            } else {
                h * lit((n + 1) as f64)
            };
            self.record(t_next)?;
        }
        Ok(())
    }

    /// One Dormand-Prince step from the current state. Leaves the fifth-order
    /// solution in `stage` and returns the scaled error norm.
    fn dp_step(&mut self, t: T, h: T, rtol: T, atol: T) -> Result<T> {
        for s in 0..7 {
            let coeffs: Vec<(usize, T)> = (0..s).map(|j| (j, lit::<T>(DP_A[s][j]))).collect();
            self.set_stage(h, &coeffs);
            self.flow(t + h * lit(DP_C[s]), s)?;
        }
        // stage 7 sits at the fifth-order solution
        let coeffs: Vec<(usize, T)> = (0..6).map(|j| (j, lit::<T>(DP_A[6][j]))).collect();
        self.set_stage(h, &coeffs);
        Self::clamp(&self.bounds, &mut self.stage);
        let n = self.state.len();
        if n == 0 {
            return Ok(T::zero());
        }
        let mut sum = T::zero();
        for i in 0..n {
            let mut e = T::zero();
            for (s, &w) in DP_E.iter().enumerate() {
                e = e + lit::<T>(w) * self.k[s][i];
            }
            let scale = atol + rtol * self.state[i].abs().max(self.stage[i].abs());
            let r = h * e / scale;
            sum = sum + r * r;
        }
        Ok((sum / lit(n as f64)).sqrt())
    }

    fn adaptive(&mut self, t_end: T, rtol: T, atol: T, dt_min: T, dt_max: T) -> Result<()> {
        let drive = *self.sys.drive();
        let period = drive.period();
        let eps = lit::<T>(1e-12) * period;
        let mut t = T::zero();
        let mut h = dt_max.min(period / lit(64.0)).max(dt_min);
        self.record(t)?;
        while t_end - t > eps {
            let boundary = ((t / period + lit(1e-9)).floor() + T::one()) * period;
            let mut event = boundary.min(t_end);
            if let Some(c) = drive.next_corner_after(t) {
                event = event.min(c);
            }
            let remaining = event - t;
            let clipped = h >= remaining;
            let h_try = if clipped { remaining } else { h };
            self.update_sweep(t, h_try);
            let err = self.dp_step(t, h_try, rtol, atol)?;
            let factor = if err == T::zero() {
                lit(5.0)
            } else {
                (lit::<T>(0.9) * err.powf(lit(-0.2))).max(lit(0.2)).min(lit(5.0))
            };
            let forced = clipped && h_try < dt_min;
            if err <= T::one() || forced {
                self.state.copy_from_slice(&self.stage);
                t = if clipped { event } else { t + h_try };
                self.record(t)?;
                let grown = (h_try * factor).min(dt_max);
                h = if clipped { grown.max(h) } else { grown };
                h = h.max(dt_min);
            } else {
                h = h_try * factor;
                if h < dt_min {
                    return Err(Error::StepUnderflow {
                        t: to_f64(t),
                        dt: to_f64(h),
                    });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{
        DivergentParams, DivergentRMemristor, LinearCapacitor, Quantity, TangentPinchMemristor,
    };

    #[test]
    fn drive_mismatch_is_rejected() {
        let c = LinearCapacitor::new(1e-9_f64).unwrap();
        let drive = DriveWaveform::sinusoid(Quantity::Current, 1.0, 1.0);
        let cfg = IntegratorConfig::rk4(1e-3, 2);
        assert!(matches!(
            integrate(&c, &drive, &cfg),
            Err(Error::DriveMismatch { .. })
        ));
    }

    #[test]
    fn config_validation() {
        assert!(IntegratorConfig::rk4(0.0_f64, 2).validate().is_err());
        assert!(IntegratorConfig::rk4(1e-3_f64, 1).validate().is_err());
        assert!(IntegratorConfig::adaptive(1e-6_f64, 1e-9, 1e-3, 1e-6, 2)
            .validate()
            .is_err());
    }

    #[test]
    fn linear_capacitor_tracks_source() {
        let (c, a, f) = (2.2e-9_f64, 1.7, 50.0);
        let cap = LinearCapacitor::new(c).unwrap();
        let drive = DriveWaveform::sinusoid(Quantity::Voltage, a, f);
        let cfg = IntegratorConfig::rk4(1.0 / (1000.0 * f), 2);
        let ts = integrate(&cap, &drive, &cfg).unwrap();
        assert_eq!(ts.len(), 2001);
        for (&t, &q) in ts.t.iter().zip(&ts.y) {
            let exact = c * a * (std::f64::consts::TAU * f * t).sin();
            assert!((q - exact).abs() <= 1e-6 * c * a);
        }
        assert!(ts.uniform_step().is_some());
    }

    #[test]
    fn frozen_state_stays_constant() {
        let m = DivergentRMemristor::new(DivergentParams {
            beta: 0.0,
            x0: 0.5,
            ..Default::default()
        })
        .unwrap();
        let drive = DriveWaveform::sinusoid(Quantity::Current, 1e-3, 1.0);
        for cfg in [
            IntegratorConfig::rk4(1e-3, 3),
            IntegratorConfig::adaptive(1e-8, 1e-12, 1e-9, 1e-2, 3),
        ] {
            let ts = integrate(&m, &drive, &cfg).unwrap();
            assert!(ts.x.iter().all(|x| x[0] == 0.5));
        }
    }

    fn relaxation_exact(beta: f64, level: f64, t: f64) -> f64 {
        // x(0) = 0, dx/dt = beta (level - x)
        level * (1.0 - (-beta * t).exp())
    }

    #[test]
    fn rk4_matches_exponential_relaxation() {
        let (beta, i_ref, i) = (3.0_f64, 1e-3, 2e-3);
        let m = TangentPinchMemristor::new(10.0, 5.0, beta, i_ref).unwrap();
        let drive = DriveWaveform::constant(Quantity::Current, i, 1.0);
        let ts = integrate(&m, &drive, &IntegratorConfig::rk4(1e-3, 2)).unwrap();
        for (&t, x) in ts.t.iter().zip(&ts.x) {
            let exact = relaxation_exact(beta, i / i_ref, t);
            assert!((x[0] - exact).abs() <= 1e-8 * exact.max(1e-300), "t={t}");
        }
    }

    #[test]
    fn adaptive_matches_exponential_relaxation() {
        let (beta, i_ref, i) = (3.0_f64, 1e-3, -2e-3);
        let m = TangentPinchMemristor::new(10.0, 5.0, beta, i_ref).unwrap();
        let drive = DriveWaveform::constant(Quantity::Current, i, 1.0);
        let cfg = IntegratorConfig::adaptive(1e-10, 1e-12, 1e-9, 0.1, 2);
        let ts = integrate(&m, &drive, &cfg).unwrap();
        assert!(ts.len() < 2000);
        for (&t, x) in ts.t.iter().zip(&ts.x) {
            let exact = relaxation_exact(beta, 2.0, t);
            assert!((x[0] - exact).abs() <= 1e-8 * exact.max(1e-12), "t={t}");
        }
        assert_eq!(*ts.t.last().unwrap(), 2.0);
    }

    #[test]
    fn adaptive_lands_on_triangle_corners() {
        let m = TangentPinchMemristor::new(10.0_f64, 5.0, 4.0, 1e-3).unwrap();
        let drive = DriveWaveform::triangle(Quantity::Current, 1e-3, 2.0);
        let cfg = IntegratorConfig::adaptive(1e-8, 1e-12, 1e-10, 0.05, 2);
        let ts = integrate(&m, &drive, &cfg).unwrap();
        for corner in [0.125, 0.375, 0.625, 0.875, 0.5, 1.0] {
            assert!(
                ts.t.iter().any(|&t| (t - corner).abs() < 1e-12),
                "missing step boundary at {corner}"
            );
        }
    }

    #[test]
    fn adaptive_reports_underflow() {
        let m = TangentPinchMemristor::new(10.0_f64, 5.0, 1e6, 1e-3).unwrap();
        let drive = DriveWaveform::sinusoid(Quantity::Current, 1e-3, 1.0);
        let cfg = IntegratorConfig::adaptive(1e-12, 1e-14, 1e-3, 0.1, 2);
        assert!(matches!(
            integrate(&m, &drive, &cfg),
            Err(Error::StepUnderflow { .. })
        ));
    }

    #[test]
    fn works_in_single_precision() {
        let m = TangentPinchMemristor::new(10.0_f32, 5.0, 3.0, 1e-3).unwrap();
        let drive = DriveWaveform::constant(Quantity::Current, 1e-3_f32, 1.0);
        let ts = integrate(&m, &drive, &IntegratorConfig::rk4(1e-2, 2)).unwrap();
        let last = ts.x.last().unwrap()[0];
        assert!((last - relaxation_exact(3.0, 1.0, 2.0) as f32).abs() < 1e-5);
    }
}
