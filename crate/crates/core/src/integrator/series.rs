use crate::error::{Error, Result};
use crate::models::ElementKind;
use crate::scalar::{lit, Scalar};
use crate::waveform::DriveWaveform;

/// What produced a [`TimeSeries`]. Ingested data carries no drive or kind.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SeriesMeta<T> {
    pub kind: Option<ElementKind>,
    pub drive: Option<DriveWaveform<T>>,
    pub label: String,
}

/// Sampled trajectory: time, drive `u`, response `y`, and state `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries<T> {
    pub t: Vec<T>,
    pub u: Vec<T>,
    pub y: Vec<T>,
    /// One state vector per sample; empty vectors for stateless elements.
    pub x: Vec<Vec<T>>,
    pub meta: SeriesMeta<T>,
}

impl<T: Scalar> TimeSeries<T> {
    pub fn new(t: Vec<T>, u: Vec<T>, y: Vec<T>, x: Vec<Vec<T>>, meta: SeriesMeta<T>) -> Result<Self> {
        let ts = Self { t, u, y, x, meta };
        ts.validate()?;
        Ok(ts)
    }

    /// Series with no state columns.
    pub fn from_columns(t: Vec<T>, u: Vec<T>, y: Vec<T>) -> Result<Self> {
        let x = vec![Vec::new(); t.len()];
        Self::new(t, u, y, x, SeriesMeta::default())
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.t.len();
        if n < 2 {
            return Err(Error::Series(format!("need at least 2 samples, got {n}")));
        }
        if self.u.len() != n || self.y.len() != n || self.x.len() != n {
            return Err(Error::Series(format!(
                "column lengths differ: t={n}, u={}, y={}, x={}",
                self.u.len(),
                self.y.len(),
                self.x.len()
            )));
        }
        if let Some(k) = self.t.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::Series(format!(
                "time not strictly increasing at sample {}",
                k + 1
            )));
        }
        let dim = self.x[0].len();
        if self.x.iter().any(|s| s.len() != dim) {
            return Err(Error::Series("state vectors have differing lengths".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn state_dim(&self) -> usize {
        self.x.first().map_or(0, Vec::len)
    }

    pub fn duration(&self) -> T {
        self.t[self.t.len() - 1] - self.t[0]
    }

    /// Step size if every step agrees with the mean step to a relative
    /// `1e-9`, else `None`.
    pub fn uniform_step(&self) -> Option<T> {
        let n = self.t.len();
        let h = self.duration() / lit(n as f64 - 1.0);
        let tol = lit::<T>(1e-9) * h;
        self.t
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() <= tol)
            .then_some(h)
    }

    /// Linear resampling onto `n` uniform samples spanning the same interval.
    pub fn resample_uniform(&self, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewPoints { needed: 2, found: n });
        }
        let t0 = self.t[0];
        let h = self.duration() / lit(n as f64 - 1.0);
        let mut out = Self {
            t: Vec::with_capacity(n),
            u: Vec::with_capacity(n),
            y: Vec::with_capacity(n),
            x: Vec::with_capacity(n),
            meta: self.meta.clone(),
        };
        for k in 0..n {
            let t = if k == n - 1 {
                self.t[self.t.len() - 1]
            } else {
                t0 + h * lit(k as f64)
            };
            let (j, w) = self.locate(t);
            let lerp = |a: T, b: T| a + (b - a) * w;
            out.t.push(t);
            out.u.push(lerp(self.u[j], self.u[j + 1]));
            out.y.push(lerp(self.y[j], self.y[j + 1]));
            out.x.push(
                self.x[j]
                    .iter()
                    .zip(&self.x[j + 1])
                    .map(|(&a, &b)| lerp(a, b))
                    .collect(),
            );
        }
        Ok(out)
    }

    /// Interval index `j` and weight `w` with `t = t[j] + w (t[j+1] - t[j])`,
    /// clamped to the series.
    pub(crate) fn locate(&self, t: T) -> (usize, T) {
        let n = self.t.len();
        let j = match self.t.binary_search_by(|p| p.partial_cmp(&t).unwrap_or(std::cmp::Ordering::Less)) {
            Ok(j) => j.min(n - 2),
            Err(0) => 0,
            Err(j) => (j - 1).min(n - 2),
        };
        let w = (t - self.t[j]) / (self.t[j + 1] - self.t[j]);
        (j, w.max(T::zero()).min(T::one()))
    }

    /// `(u, y)` at time `t` by linear interpolation.
    pub(crate) fn sample(&self, t: T) -> (T, T) {
        let (j, w) = self.locate(t);
        (
            self.u[j] + (self.u[j + 1] - self.u[j]) * w,
            self.y[j] + (self.y[j + 1] - self.y[j]) * w,
        )
    }
}
