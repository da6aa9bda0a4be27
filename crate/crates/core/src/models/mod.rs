//! Memory element abstraction and the concrete devices.
//!
//! Every element is a state-space system: a response law `y = r(x, u)` and a
//! state evolution law `dx/dt = f(x, u)`. The input `u` is the quantity the
//! element is driven by (current for current-controlled memristive and
//! meminductive elements, voltage otherwise) and `y` is the conjugate output.
//!
//! Models are immutable and pure. They do not clamp their own state; the
//! integrator enforces [`Bounds`] by zeroing outward-pointing derivative
//! components at a saturated bound.

mod divergent;
mod ferro;
mod linear;
mod pinch;

use std::fmt::Debug;

pub use divergent::{DivergentGMemristor, DivergentParams, DivergentRMemristor};
pub use ferro::{FerroParams, FerroelectricMemcapacitor, VACUUM_PERMITTIVITY};
pub use linear::{LinearCapacitor, LinearResistor};
pub use pinch::{StateCoupling, TangentPinchMemristor};

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ElementKind {
    /// `V = R_M(x, I) I`, driven by current.
    MemristiveCurrentControlled,
    /// `I = G_M(x, V) V`, driven by voltage.
    MemristiveVoltageControlled,
    /// `q = C_M(x, V) V`, driven by voltage.
    Memcapacitive,
    /// `phi = L_M(x, I) I`, driven by current.
    Meminductive,
}

impl ElementKind {
    /// The physical quantity a source must supply to drive this element.
    pub fn input(self) -> Quantity {
        match self {
            ElementKind::MemristiveCurrentControlled | ElementKind::Meminductive => {
                Quantity::Current
            }
            ElementKind::MemristiveVoltageControlled | ElementKind::Memcapacitive => {
                Quantity::Voltage
            }
        }
    }

    pub fn is_memristive(self) -> bool {
        matches!(
            self,
            ElementKind::MemristiveCurrentControlled | ElementKind::MemristiveVoltageControlled
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantity {
    Current,
    Voltage,
}

/// Sign of the input's time derivative, as seen by direction-dependent laws.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sweep {
    Rising,
    Falling,
}

/// Closed interval a state component must stay within.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bounds<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> Bounds<T> {
    pub fn new(lo: T, hi: T) -> Self {
        Self { lo, hi }
    }

    pub fn unbounded() -> Self {
        Self {
            lo: T::neg_infinity(),
            hi: T::infinity(),
        }
    }

    pub fn contains(&self, v: T) -> bool {
        v >= self.lo && v <= self.hi
    }

    pub fn clamp(&self, v: T) -> T {
        v.max(self.lo).min(self.hi)
    }
}

/// A two-terminal element with internal memory.
pub trait MemElement<T: Scalar>: Debug + Send + Sync {
    fn kind(&self) -> ElementKind;

    /// Admissible range of each state component; its length is the state
    /// dimension.
    fn state_bounds(&self) -> Vec<Bounds<T>>;

    fn initial_state(&self) -> Vec<T>;

    /// Output for state `x` and input `u`.
    fn response(&self, x: &[T], u: T) -> T;

    /// `d response / du` at fixed state. The default is a central
    /// difference; elements with a closed form override it.
    fn response_slope(&self, x: &[T], u: T) -> T {
        let h = lit::<T>(1e-6) * (T::one() + u.abs());
        (self.response(x, u + h) - self.response(x, u - h)) / (h + h)
    }

    /// Writes `dx/dt` into `dx`. `sweep` is the direction the drive is
    /// moving in; most elements ignore it.
    fn state_rate(&self, x: &[T], u: T, sweep: Sweep, dx: &mut [T]);

    fn state_dim(&self) -> usize {
        self.state_bounds().len()
    }

    /// Checks the length of `x` and that each component is in bounds.
    fn check_state(&self, x: &[T]) -> Result<()> {
        let bounds = self.state_bounds();
        if x.len() != bounds.len() {
            return Err(Error::StateDimension {
                expected: bounds.len(),
                found: x.len(),
            });
        }
        for (component, (&v, b)) in x.iter().zip(&bounds).enumerate() {
            if !b.contains(v) {
                return Err(Error::StateOutOfBounds {
                    component,
                    value: to_f64(v),
                    lo: to_f64(b.lo),
                    hi: to_f64(b.hi),
                });
            }
        }
        Ok(())
    }
}

/// Voltage across a current-controlled memristive element carrying `i`.
pub fn eval_memristive<T: Scalar>(element: &dyn MemElement<T>, x: &[T], i: T) -> Result<T> {
    if element.kind() != ElementKind::MemristiveCurrentControlled {
        return Err(Error::WrongKind {
            expected: "current-controlled memristive",
            found: element.kind(),
        });
    }
    element.check_state(x)?;
    Ok(element.response(x, i))
}

/// `sign(u) * sqrt(|u|)`, exact at zero.
#[inline]
pub(crate) fn signed_sqrt<T: Scalar>(u: T) -> T {
    if u == T::zero() {
        T::zero()
    } else {
        u.signum() * u.abs().sqrt()
    }
}

pub(crate) fn require_positive<T: Scalar>(name: &'static str, v: T) -> Result<()> {
    if v.is_finite() && v > T::zero() {
        Ok(())
    } else {
        Err(crate::error::invalid(name, format!("must be finite and > 0, got {v}")))
    }
}

pub(crate) fn require_nonnegative<T: Scalar>(name: &'static str, v: T) -> Result<()> {
    if v.is_finite() && v >= T::zero() {
        Ok(())
    } else {
        Err(crate::error::invalid(name, format!("must be finite and >= 0, got {v}")))
    }
}
