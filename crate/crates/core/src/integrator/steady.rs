use super::TimeSeries;
use crate::analysis::HysteresisLoop;
use crate::error::{invalid, Error, Result};
use crate::scalar::{lit, to_f64, Scalar};

/// Phase grid size used to compare periods.
pub const DEFAULT_PHASE_POINTS: usize = 512;

fn whole_periods<T: Scalar>(ts: &TimeSeries<T>, period: T) -> usize {
    let n = to_f64(ts.duration() / period);
    (n + 1e-9).floor().max(0.0) as usize
}

/// Distance between periods `a` and `b` (counted from the first sample) on
/// a common phase grid of `points` samples.
///
/// Each axis is normalized by the range of period `b`, and the result is the
/// largest per-sample deviation along either axis.
pub fn period_distance<T: Scalar>(
    ts: &TimeSeries<T>,
    period: T,
    a: usize,
    b: usize,
    points: usize,
) -> Result<T> {
    let have = whole_periods(ts, period);
    if a.max(b) >= have {
        return Err(Error::TooShort {
            spanned: to_f64(ts.duration() / period),
            needed: (a.max(b) + 1) as f64,
        });
    }
    let t0 = ts.t[0];
    Ok(distance_between(
        ts,
        period,
        t0 + period * lit(a as f64),
        t0 + period * lit(b as f64),
        points,
    ))
}

fn distance_between<T: Scalar>(
    ts: &TimeSeries<T>,
    period: T,
    start_a: T,
    start_b: T,
    points: usize,
) -> T {
    let step = period / lit(points as f64);
    let grid_b: Vec<(T, T)> = (0..points)
        .map(|k| ts.sample(start_b + step * lit(k as f64)))
        .collect();
    let range = |f: fn(&(T, T)) -> T| {
        let (lo, hi) = grid_b
            .iter()
            .map(f)
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), v| (lo.min(v), hi.max(v)));
        let r = hi - lo;
        if r > T::zero() {
            r
        } else {
            T::one()
        }
    };
    let u_range = range(|p| p.0);
    let y_range = range(|p| p.1);
    let mut worst = T::zero();
    for (k, &(ub, yb)) in grid_b.iter().enumerate() {
        let (ua, ya) = ts.sample(start_a + step * lit(k as f64));
        worst = worst
            .max((ua - ub).abs() / u_range)
            .max((ya - yb).abs() / y_range);
    }
    worst
}

/// The last full period of `ts` as a closed loop, provided it agrees with the
/// period before it to within `steady_tol`.
pub fn steady_loop<T: Scalar>(
    ts: &TimeSeries<T>,
    period: T,
    steady_tol: T,
) -> Result<HysteresisLoop<T>> {
    steady_loop_with(ts, period, steady_tol, DEFAULT_PHASE_POINTS)
}

pub fn steady_loop_with<T: Scalar>(
    ts: &TimeSeries<T>,
    period: T,
    steady_tol: T,
    points: usize,
) -> Result<HysteresisLoop<T>> {
    if !(period.is_finite() && period > T::zero()) {
        return Err(invalid("period", "must be finite and > 0"));
    }
    if points < 4 {
        return Err(invalid("points", "phase grid needs at least 4 points"));
    }
    let have = whole_periods(ts, period);
    if have < 2 {
        return Err(Error::TooShort {
            spanned: to_f64(ts.duration() / period),
            needed: 2.0,
        });
    }
    let t_end = ts.t[ts.len() - 1];
    let start = t_end - period;
    let distance = distance_between(ts, period, start - period, start, points);
    if !(distance < steady_tol) {
        return Err(Error::NotConverged {
            distance: to_f64(distance),
            tol: to_f64(steady_tol),
        });
    }
    let eps = lit::<T>(1e-9) * period;
    let mut pts: Vec<(T, T)> = ts
        .t
        .iter()
        .zip(ts.u.iter().zip(&ts.y))
        .filter(|(&t, _)| t >= start - eps && t < t_end - eps)
        .map(|(_, (&u, &y))| (u, y))
        .collect();
    if pts.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            found: pts.len(),
        });
    }
    pts.push(pts[0]);
    Ok(HysteresisLoop::new(pts))
}
