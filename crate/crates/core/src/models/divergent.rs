use super::{
    require_nonnegative, require_positive, signed_sqrt, Bounds, ElementKind, MemElement, Sweep,
};
use crate::error::{invalid, Result};
use crate::scalar::{lit, Scalar};

/// Parameters shared by the divergent-resistance memristor and its
/// divergent-conductance dual.
///
/// The state `x` lives in `[0, 1]` and scales the response through
/// `g(x) = g0 * (1 + alpha * x)`. It evolves as
/// `dx/dt = beta * (u / drive_ref) * x * (1 - x)`, so both bounds are fixed
/// points and `x` never leaves the unit interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DivergentParams<T> {
    /// Response prefactor in Ohm*A^(1/2). The dual uses `1 / g0`, in
    /// A*V^(-1/2).
    pub g0: T,
    pub alpha: T,
    /// Rate constant, 1/s.
    pub beta: T,
    /// Drive magnitude at which the state moves at rate `beta`: amperes for
    /// the resistive form, volts for the dual.
    pub drive_ref: T,
    pub x0: T,
}

impl<T: Scalar> Default for DivergentParams<T> {
    fn default() -> Self {
        Self {
            g0: T::one(),
            alpha: T::one(),
            beta: T::PI(),
            drive_ref: lit(1e-3),
            x0: lit(0.2),
        }
    }
}

impl<T: Scalar> DivergentParams<T> {
    pub fn validate(&self) -> Result<()> {
        require_positive("g0", self.g0)?;
        require_nonnegative("alpha", self.alpha)?;
        if !self.beta.is_finite() {
            return Err(invalid("beta", "must be finite"));
        }
        require_positive("drive_ref", self.drive_ref)?;
        if !(self.x0 >= T::zero() && self.x0 <= T::one()) {
            return Err(invalid("x0", format!("must lie in [0, 1], got {}", self.x0)));
        }
        Ok(())
    }

    /// `1 + alpha * x`.
    fn modulation(&self, x: T) -> T {
        T::one() + self.alpha * x
    }

    fn window_rate(&self, x: T, u: T) -> T {
        self.beta * (u / self.drive_ref) * x * (T::one() - x)
    }
}

/// Current-controlled memristive system with `R_M(x, I) = g(x) / sqrt(|I|)`.
///
/// The response is evaluated as `g(x) * sign(I) * sqrt(|I|)`, which is the
/// same law with the removable singularity at `I = 0` taken exactly: the
/// voltage vanishes with the current while the resistance `V / I` diverges.
#[derive(Clone, Debug, PartialEq)]
pub struct DivergentRMemristor<T> {
    params: DivergentParams<T>,
}

impl<T: Scalar> DivergentRMemristor<T> {
    pub fn new(params: DivergentParams<T>) -> Result<Self> {
        params.validate()?;
        Ok(Self { params })
    }

    pub fn params(&self) -> &DivergentParams<T> {
        &self.params
    }

    /// `g(x) = g0 * (1 + alpha * x)`.
    pub fn g(&self, x: T) -> T {
        self.params.g0 * self.params.modulation(x)
    }

    /// Memory resistance `g(x) / sqrt(|i|)`; infinite at `i = 0` when
    /// `g(x) > 0`.
    pub fn resistance(&self, x: T, i: T) -> T {
        self.g(x) / i.abs().sqrt()
    }
}

impl<T: Scalar> MemElement<T> for DivergentRMemristor<T> {
    fn kind(&self) -> ElementKind {
        ElementKind::MemristiveCurrentControlled
    }

    fn state_bounds(&self) -> Vec<Bounds<T>> {
        vec![Bounds::new(T::zero(), T::one())]
    }

    fn initial_state(&self) -> Vec<T> {
        vec![self.params.x0]
    }

    fn response(&self, x: &[T], i: T) -> T {
        self.g(x[0]) * signed_sqrt(i)
    }

    fn state_rate(&self, x: &[T], i: T, _sweep: Sweep, dx: &mut [T]) {
        dx[0] = self.params.window_rate(x[0], i);
    }
}

/// Voltage-controlled dual: `I = h(x) * sign(V) * sqrt(|V|)` with
/// `h(x) = (1 + alpha * x) / g0`. The current vanishes with the voltage
/// while the conductance `I / V` diverges.
#[derive(Clone, Debug, PartialEq)]
pub struct DivergentGMemristor<T> {
    params: DivergentParams<T>,
}

impl<T: Scalar> DivergentGMemristor<T> {
    pub fn new(params: DivergentParams<T>) -> Result<Self> {
        params.validate()?;
        Ok(Self { params })
    }

    pub fn params(&self) -> &DivergentParams<T> {
        &self.params
    }

    pub fn h(&self, x: T) -> T {
        self.params.modulation(x) / self.params.g0
    }
}

impl<T: Scalar> MemElement<T> for DivergentGMemristor<T> {
    fn kind(&self) -> ElementKind {
        ElementKind::MemristiveVoltageControlled
    }

    fn state_bounds(&self) -> Vec<Bounds<T>> {
        vec![Bounds::new(T::zero(), T::one())]
    }

    fn initial_state(&self) -> Vec<T> {
        vec![self.params.x0]
    }

    fn response(&self, x: &[T], v: T) -> T {
        self.h(x[0]) * signed_sqrt(v)
    }

    fn state_rate(&self, x: &[T], v: T, _sweep: Sweep, dx: &mut [T]) {
        dx[0] = self.params.window_rate(x[0], v);
    }
}
