//! Loop geometry, hysteresis taxonomy, and divergence-exponent fits.

mod classify;
mod geometry;
mod limit;
mod peaks;

pub use classify::{classify_loop, ClassifierTolerances, LoopClassification, Verdict};
pub use geometry::{loop_area, shoelace, LoopArea};
pub use limit::{limit_scan, LimitScan, ScanPoint};
pub use peaks::{switching_peaks, Peak};

use crate::scalar::Scalar;

/// One period of `(u, y)` samples traversed in time order.
///
/// A closed loop repeats its first point at the end.
#[derive(Clone, Debug, PartialEq)]
pub struct HysteresisLoop<T> {
    pub points: Vec<(T, T)>,
    /// Largest `|u|` on the loop.
    pub u_scale: T,
    /// Largest `|y|` on the loop.
    pub y_scale: T,
}

impl<T: Scalar> HysteresisLoop<T> {
    /// Wraps `points` as given; see [`HysteresisLoop::closing`] to append
    /// the first point.
    pub fn new(points: Vec<(T, T)>) -> Self {
        let (u_scale, y_scale) = points.iter().fold((T::zero(), T::zero()), |(a, b), &(u, y)| {
            (a.max(u.abs()), b.max(y.abs()))
        });
        Self {
            points,
            u_scale,
            y_scale,
        }
    }

    /// Builds a closed loop, appending the first point if needed.
    pub fn closing(mut points: Vec<(T, T)>) -> Self {
        if let (Some(&first), Some(&last)) = (points.first(), points.last()) {
            if first != last {
                points.push(first);
            }
        }
        Self::new(points)
    }

    pub fn is_closed(&self) -> bool {
        self.points.len() >= 2 && self.points.first() == self.points.last()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Distinct vertices of a closed loop (the closing duplicate dropped).
    pub(crate) fn vertices(&self) -> &[(T, T)] {
        if self.is_closed() {
            &self.points[..self.points.len() - 1]
        } else {
            &self.points
        }
    }

    /// Same loop traversed in the opposite direction.
    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        Self::new(points)
    }

    /// Applies `u -> a u`, `y -> b y`.
    pub fn scaled(&self, a: T, b: T) -> Self {
        Self::new(self.points.iter().map(|&(u, y)| (a * u, b * y)).collect())
    }
}
