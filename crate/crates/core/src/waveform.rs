//! Periodic excitation sources.

use crate::error::{invalid, Result};
use crate::models::{Quantity, Sweep};
use crate::scalar::{lit, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WaveShape {
    Triangular,
    Sinusoidal,
}

/// A periodic source `offset + amplitude * w(2*pi*frequency*t + phase)`.
///
/// The unit waveform `w` has period `2*pi`, starts at zero and rises first,
/// so the triangular and sinusoidal shapes share their zero crossings and
/// extrema.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriveWaveform<T> {
    pub shape: WaveShape,
    pub quantity: Quantity,
    pub amplitude: T,
    pub frequency: T,
    pub phase: T,
    pub offset: T,
}

impl<T: Scalar> DriveWaveform<T> {
    pub fn new(shape: WaveShape, quantity: Quantity, amplitude: T, frequency: T) -> Self {
        Self {
            shape,
            quantity,
            amplitude,
            frequency,
            phase: T::zero(),
            offset: T::zero(),
        }
    }

    pub fn sinusoid(quantity: Quantity, amplitude: T, frequency: T) -> Self {
        Self::new(WaveShape::Sinusoidal, quantity, amplitude, frequency)
    }

    pub fn triangle(quantity: Quantity, amplitude: T, frequency: T) -> Self {
        Self::new(WaveShape::Triangular, quantity, amplitude, frequency)
    }

    /// A constant source of value `level`; `frequency` only sets the period
    /// used to size runs.
    pub fn constant(quantity: Quantity, level: T, frequency: T) -> Self {
        Self {
            offset: level,
            ..Self::new(WaveShape::Sinusoidal, quantity, T::zero(), frequency)
        }
    }

    pub fn with_amplitude(mut self, amplitude: T) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.frequency.is_finite() && self.frequency > T::zero()) {
            return Err(invalid("frequency", "must be finite and > 0"));
        }
        if !self.amplitude.is_finite() || self.amplitude < T::zero() {
            return Err(invalid("amplitude", "must be finite and >= 0"));
        }
        if !self.phase.is_finite() {
            return Err(invalid("phase", "must be finite"));
        }
        if !self.offset.is_finite() {
            return Err(invalid("offset", "must be finite"));
        }
        Ok(())
    }

    pub fn period(&self) -> T {
        T::one() / self.frequency
    }

    /// Largest absolute value the source reaches.
    pub fn peak(&self) -> T {
        self.amplitude.abs() + self.offset.abs()
    }

    /// Position within the current cycle, in `[0, 1)`.
    fn cycle_fraction(&self, t: T) -> T {
        let c = self.frequency * t + self.phase / T::TAU();
        c - c.floor()
    }

    pub fn value(&self, t: T) -> T {
        let w = match self.shape {
            WaveShape::Sinusoidal => (T::TAU() * self.frequency * t + self.phase).sin(),
            WaveShape::Triangular => {
                let s = self.cycle_fraction(t);
                let four = lit::<T>(4.0);
                if s < lit(0.25) {
                    four * s
                } else if s < lit(0.75) {
                    lit::<T>(2.0) - four * s
                } else {
                    four * s - four
                }
            }
        };
        self.offset + self.amplitude * w
    }

    /// Time derivative; right-sided at triangle corners.
    pub fn slope(&self, t: T) -> T {
        match self.shape {
            WaveShape::Sinusoidal => {
                let omega = T::TAU() * self.frequency;
                self.amplitude * omega * (omega * t + self.phase).cos()
            }
            WaveShape::Triangular => {
                let s = self.cycle_fraction(t);
                let rate = lit::<T>(4.0) * self.amplitude * self.frequency;
                if s < lit(0.25) || s >= lit(0.75) {
                    rate
                } else {
                    -rate
                }
            }
        }
    }

    /// Direction of the source at `t`, or `None` where the slope vanishes.
    pub fn sweep(&self, t: T) -> Option<Sweep> {
        let d = self.slope(t);
        if d > T::zero() {
            Some(Sweep::Rising)
        } else if d < T::zero() {
            Some(Sweep::Falling)
        } else {
            None
        }
    }

    /// First instant strictly after `t` where the derivative jumps.
    /// Sinusoids have none.
    pub fn next_corner_after(&self, t: T) -> Option<T> {
        if self.shape != WaveShape::Triangular || self.amplitude == T::zero() {
            return None;
        }
        let shift = self.phase / T::TAU();
        let c = self.frequency * t + shift;
        let base = c.floor();
        let eps = lit::<T>(1e-12) * (T::one() + c.abs());
        [0.25, 0.75, 1.25]
            .iter()
            .map(|&q| base + lit(q))
            .find(|&cand| cand > c + eps)
            .map(|cand| (cand - shift) / self.frequency)
    }
}
