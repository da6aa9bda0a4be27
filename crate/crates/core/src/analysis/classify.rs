use std::fmt;
use std::str::FromStr;

use super::{loop_area, HysteresisLoop};
use crate::error::{invalid, Error, Result};
use crate::scalar::{lit, Scalar};

/// Taxonomy of steady input-output loops.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// Encloses no area: a single-valued curve.
    NoHysteresis,
    /// Passes through the origin with both branches sharing one slope there.
    PinchedTangent,
    /// Passes through the origin with different branch slopes: the loop is
    /// twisted into a self-crossing figure-eight.
    PinchedCrossing,
    /// Misses the origin on at least one branch.
    NonPinched,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::NoHysteresis => "NoHysteresis",
            Verdict::PinchedTangent => "PinchedTangent",
            Verdict::PinchedCrossing => "PinchedCrossing",
            Verdict::NonPinched => "NonPinched",
        }
    }

    pub fn is_pinched(self) -> bool {
        matches!(self, Verdict::PinchedTangent | Verdict::PinchedCrossing)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Verdict::NoHysteresis,
            Verdict::PinchedTangent,
            Verdict::PinchedCrossing,
            Verdict::NonPinched,
        ]
        .into_iter()
        .find(|v| v.as_str() == s)
        .ok_or_else(|| format!("unknown verdict `{s}`"))
    }
}

/// Relative thresholds of the classifier.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassifierTolerances<T> {
    /// Largest `|y| / y_scale` at `u = 0` that still counts as through the
    /// origin.
    pub gap_tol: T,
    /// Largest relative branch-slope mismatch that still counts as tangent.
    pub slope_tol: T,
    /// Smallest enclosed area, relative to `u_scale * y_scale`, that counts
    /// as hysteresis.
    pub area_tol: T,
}

impl<T: Scalar> Default for ClassifierTolerances<T> {
    fn default() -> Self {
        Self {
            gap_tol: lit(0.02),
            slope_tol: lit(0.05),
            area_tol: lit(1e-4),
        }
    }
}

impl<T: Scalar> ClassifierTolerances<T> {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("gap_tol", self.gap_tol),
            ("slope_tol", self.slope_tol),
            ("area_tol", self.area_tol),
        ] {
            if !(v.is_finite() && v >= T::zero()) {
                return Err(invalid(name, "must be finite and >= 0"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LoopClassification<T> {
    pub verdict: Verdict,
    /// Larger of the two branch gaps; `None` when the loop never reaches
    /// `u = 0`.
    pub origin_gap: Option<T>,
    /// Smallest `|y| / y_scale` over the crossings of `u = 0` while `u`
    /// increases.
    pub gap_asc: Option<T>,
    /// Same for crossings while `u` decreases.
    pub gap_desc: Option<T>,
    /// `dy/du` at the ascending crossing closest to the origin.
    pub slope_asc: Option<T>,
    pub slope_desc: Option<T>,
    pub total_area: T,
    pub enclosed_area: T,
    pub lobe_areas: Vec<T>,
    /// Number of `u = 0` crossings found.
    pub crossings: usize,
    pub tolerances: ClassifierTolerances<T>,
    pub notes: Vec<String>,
}

/// Minimum number of points (closing point included) a loop must have.
pub const MIN_LOOP_POINTS: usize = 8;
const SLOPE_WINDOW: usize = 5;

#[derive(Clone, Copy, Debug)]
struct Crossing<T> {
    /// Segment index; the crossing lies between vertices `seg` and `seg + 1`.
    seg: usize,
    frac: T,
    y: T,
}

/// Assigns a [`Verdict`] to `lp` and reports the geometry behind it.
///
/// Branches are told apart by the sign of `du` across each `u = 0`
/// crossing. A loop is pinched only if both branches pass within `gap_tol`
/// of the origin; the tangent/crossing split compares the least-squares
/// slopes over the five points nearest the pinch on each branch. A loop
/// enclosing less than `area_tol` is reported as `NoHysteresis` regardless.
pub fn classify_loop<T: Scalar>(
    lp: &HysteresisLoop<T>,
    tol: &ClassifierTolerances<T>,
) -> Result<LoopClassification<T>> {
    tol.validate()?;
    if lp.len() < MIN_LOOP_POINTS {
        return Err(Error::TooFewPoints {
            needed: MIN_LOOP_POINTS,
            found: lp.len(),
        });
    }
    let area = loop_area(lp)?;
    let v = lp.vertices();
    let m = v.len();
    let mut notes = Vec::new();

    let (mut asc, mut desc) = (Vec::new(), Vec::new());
    for k in 0..m {
        let (ua, ya) = v[k];
        let (ub, yb) = v[(k + 1) % m];
        let up = ua <= T::zero() && ub > T::zero();
        let down = ua >= T::zero() && ub < T::zero();
        if up || down {
            let frac = ua / (ua - ub);
            let c = Crossing {
                seg: k,
                frac,
                y: ya + frac * (yb - ya),
            };
            if up {
                asc.push(c);
            } else {
                desc.push(c);
            }
        }
    }
    let crossings = asc.len() + desc.len();

    let y_scale = if lp.y_scale > T::zero() { lp.y_scale } else { T::one() };
    let closest = |cs: &[Crossing<T>]| {
        cs.iter()
            .copied()
            .min_by(|a, b| a.y.abs().partial_cmp(&b.y.abs()).unwrap_or(std::cmp::Ordering::Equal))
    };
    let mut pick_asc = closest(&asc);
    let mut pick_desc = closest(&desc);

    if crossings == 0 {
        let (k, &(u_near, y_near)) = v
            .iter()
            .enumerate()
            .min_by(|a, b| a.1 .0.abs().partial_cmp(&b.1 .0.abs()).unwrap_or(std::cmp::Ordering::Equal))
            .expect("loop has vertices");
        if u_near.abs() > tol.gap_tol * lp.u_scale {
            notes.push("loop never reaches u = 0; origin gap undefined".to_string());
        } else {
            notes.push("loop touches u = 0 without crossing; using nearest vertex".to_string());
            let c = Crossing {
                seg: k,
                frac: T::zero(),
                y: y_near,
            };
            pick_asc = Some(c);
            pick_desc = Some(c);
        }
    } else if pick_asc.is_none() || pick_desc.is_none() {
        notes.push("only one branch reaches u = 0; using it for both".to_string());
        pick_asc = pick_asc.or(pick_desc);
        pick_desc = pick_desc.or(pick_asc);
    }

    let gap = |c: Option<Crossing<T>>| c.map(|c| c.y.abs() / y_scale);
    let gap_asc = gap(pick_asc);
    let gap_desc = gap(pick_desc);
    let origin_gap = match (gap_asc, gap_desc) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    };
    let slope = |c: Option<Crossing<T>>| c.and_then(|c| window_slope(v, c));
    let slope_asc = slope(pick_asc);
    let slope_desc = slope(pick_desc);

    let area_floor = tol.area_tol * lp.u_scale * lp.y_scale;
    let verdict = if !(area.enclosed >= area_floor) || area.enclosed == T::zero() {
        Verdict::NoHysteresis
    } else {
        match origin_gap {
            None => Verdict::NonPinched,
            Some(g) if g > tol.gap_tol => Verdict::NonPinched,
            Some(_) => match (slope_asc, slope_desc) {
                (Some(a), Some(b)) => {
                    if (a - b).abs() <= tol.slope_tol * a.abs().max(b.abs()) {
                        Verdict::PinchedTangent
                    } else {
                        Verdict::PinchedCrossing
                    }
                }
                _ => {
                    notes.push("branch slope undefined at the origin; treating as crossing".into());
                    Verdict::PinchedCrossing
                }
            },
        }
    };

    Ok(LoopClassification {
        verdict,
        origin_gap,
        gap_asc,
        gap_desc,
        slope_asc,
        slope_desc,
        total_area: area.total,
        enclosed_area: area.enclosed,
        lobe_areas: area.lobes,
        crossings,
        tolerances: *tol,
        notes,
    })
}

/// Least-squares slope over the five consecutive vertices nearest the
/// crossing.
fn window_slope<T: Scalar>(v: &[(T, T)], c: Crossing<T>) -> Option<T> {
    let m = v.len();
    let center = if c.frac < lit(0.5) { c.seg } else { c.seg + 1 };
    let half = SLOPE_WINDOW / 2;
    let pts: Vec<(T, T)> = (0..SLOPE_WINDOW)
        .map(|j| v[(center + m * 2 + j - half) % m])
        .collect();
    let n = lit::<T>(SLOPE_WINDOW as f64);
    let (su, sy) = pts
        .iter()
        .fold((T::zero(), T::zero()), |(a, b), &(u, y)| (a + u, b + y));
    let (mu, my) = (su / n, sy / n);
    let (mut sxy, mut sxx) = (T::zero(), T::zero());
    for &(u, y) in &pts {
        sxy = sxy + (u - mu) * (y - my);
        sxx = sxx + (u - mu) * (u - mu);
    }
    (sxx > T::zero()).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    fn param_loop(n: usize, f: impl Fn(f64) -> (f64, f64)) -> HysteresisLoop<f64> {
        HysteresisLoop::closing((0..n).map(|k| f(TAU * k as f64 / n as f64)).collect())
    }

    fn classify(lp: &HysteresisLoop<f64>) -> LoopClassification<f64> {
        classify_loop(lp, &ClassifierTolerances::default()).unwrap()
    }

    #[test]
    fn figure_eight_is_pinched_crossing() {
        let c = classify(&param_loop(512, |t| (t.sin(), (2.0 * t).sin())));
        assert_eq!(c.verdict, Verdict::PinchedCrossing);
        assert!(c.origin_gap.unwrap() < 1e-12);
        let (a, d) = (c.slope_asc.unwrap(), c.slope_desc.unwrap());
        assert!((a - 2.0).abs() < 1e-3 && (d + 2.0).abs() < 1e-3, "{a} {d}");
        assert_eq!(c.lobe_areas.len(), 2);
    }

    #[test]
    fn offset_ellipse_is_non_pinched() {
        let c = classify(&param_loop(400, |t| (t.cos(), 0.5 + t.sin())));
        assert_eq!(c.verdict, Verdict::NonPinched);
        assert!((c.gap_asc.unwrap() - 1.0 / 3.0).abs() < 1e-3);
        assert!((c.gap_desc.unwrap() - 1.0).abs() < 1e-3);
        assert!((c.origin_gap.unwrap() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn centered_ellipse_is_non_pinched() {
        let c = classify(&param_loop(400, |t| (t.cos(), t.sin())));
        assert_eq!(c.verdict, Verdict::NonPinched);
    }

    #[test]
    fn loop_away_from_origin_reports_a_note() {
        let c = classify(&param_loop(400, |t| (3.0 + t.cos(), t.sin())));
        assert_eq!(c.verdict, Verdict::NonPinched);
        assert_eq!(c.origin_gap, None);
        assert_eq!(c.crossings, 0);
        assert!(!c.notes.is_empty());
    }

    #[test]
    fn line_through_origin_is_no_hysteresis() {
        let c = classify(&param_loop(256, |t| (t.sin(), -3.0 * t.sin())));
        assert_eq!(c.verdict, Verdict::NoHysteresis);
        assert!(c.enclosed_area < 1e-12);
    }

    #[test]
    fn tangent_pinch_from_even_lobes() {
        // y = u (1 + 0.5 sin^2 t) style loop: both lobes mirror each other
        let c = classify(&param_loop(1024, |t| {
            let u = t.sin();
            (u, u * (1.5 + 0.5 * (2.0 * t - 0.6).sin()))
        }));
        assert_eq!(c.verdict, Verdict::PinchedTangent, "{c:?}");
    }

    #[test]
    fn too_few_points() {
        let l = param_loop(5, |t| (t.sin(), t.cos()));
        assert!(matches!(
            classify_loop(&l, &ClassifierTolerances::default()),
            Err(Error::TooFewPoints { .. })
        ));
    }

    #[test]
    fn verdict_round_trips_through_text() {
        for v in [
            Verdict::NoHysteresis,
            Verdict::PinchedTangent,
            Verdict::PinchedCrossing,
            Verdict::NonPinched,
        ] {
            assert_eq!(v.to_string().parse::<Verdict>().unwrap(), v);
        }
    }

    #[test]
    fn single_precision_figure_eight() {
        let l = HysteresisLoop::closing(
            (0..256)
                .map(|k| {
                    let t = std::f32::consts::TAU * k as f32 / 256.0;
                    (t.sin(), (2.0 * t).sin())
                })
                .collect(),
        );
        let c = classify_loop(&l, &ClassifierTolerances::default()).unwrap();
        assert_eq!(c.verdict, Verdict::PinchedCrossing);
    }

    fn shapes() -> Vec<HysteresisLoop<f64>> {
        vec![
            param_loop(300, |t| (t.sin(), (2.0 * t).sin())),
            param_loop(300, |t| (t.cos(), 0.5 + t.sin())),
            param_loop(300, |t| (t.sin(), 2.0 * t.sin())),
            param_loop(300, |t| {
                let u = t.sin();
                (u, u * (1.5 + 0.5 * (2.0 * t - 0.6).sin()))
            }),
        ]
    }

    proptest! {
        #[test]
        fn scale_equivariance(a in 1e-6..1e6f64, b in 1e-6..1e6f64) {
            for lp in shapes() {
                let base = classify(&lp);
                let s = classify(&lp.scaled(a, b));
                prop_assert_eq!(base.verdict, s.verdict);
                if let (Some(g0), Some(g1)) = (base.origin_gap, s.origin_gap) {
                    prop_assert!((g0 - g1).abs() <= 1e-9 * (1.0 + g0));
                }
                if let (Some(s0), Some(s1)) = (base.slope_asc, s.slope_asc) {
                    let slope_scale = (s0.abs() + lp.y_scale / lp.u_scale) * b / a;
                    prop_assert!((s1 - s0 * b / a).abs() <= 1e-9 * slope_scale);
                }
                let area_scale = lp.u_scale * lp.y_scale * a * b;
                prop_assert!((s.total_area - base.total_area * a * b).abs() <= 1e-12 * area_scale);
            }
        }

        #[test]
        fn reversal_negates_area_keeps_verdict(shift in 0usize..300) {
            for lp in shapes() {
                let mut v = lp.vertices().to_vec();
                let len = v.len();
                v.rotate_left(shift % len);
                let rotated = HysteresisLoop::closing(v);
                let base = classify(&rotated);
                let rev = classify(&rotated.reversed());
                prop_assert_eq!(base.verdict, rev.verdict);
                prop_assert!((base.total_area + rev.total_area).abs() <= 1e-12 * base.enclosed_area.max(1.0));
            }
        }
    }
}
