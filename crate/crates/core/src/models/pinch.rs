use super::{require_positive, Bounds, ElementKind, MemElement, Sweep};
use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// How the drive enters the state equation of [`TangentPinchMemristor`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StateCoupling {
    /// `dx/dt = beta * (|i| / i_ref - x)`. Under a symmetric drive the
    /// state repeats every half period, so both branches leave the origin
    /// with the same slope.
    Even,
    /// `dx/dt = beta * (i / i_ref - x)`. The state differs at the two zero
    /// crossings and the loop self-crosses at the origin.
    Odd,
}

/// Memristive system `v = (r0 + dr * x) * i` with first-order state
/// relaxation toward the normalized drive.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentPinchMemristor<T> {
    pub r0: T,
    pub dr: T,
    pub beta: T,
    pub i_ref: T,
    pub coupling: StateCoupling,
}

impl<T: Scalar> TangentPinchMemristor<T> {
    pub fn new(r0: T, dr: T, beta: T, i_ref: T) -> Result<Self> {
        Self::with_coupling(r0, dr, beta, i_ref, StateCoupling::Even)
    }

    pub fn with_coupling(
        r0: T,
        dr: T,
        beta: T,
        i_ref: T,
        coupling: StateCoupling,
    ) -> Result<Self> {
        require_positive("r0", r0)?;
        if !dr.is_finite() || r0 + dr <= T::zero() {
            return Err(invalid("dr", "need finite dr with r0 + dr > 0"));
        }
        require_positive("beta", beta)?;
        require_positive("i_ref", i_ref)?;
        Ok(Self {
            r0,
            dr,
            beta,
            i_ref,
            coupling,
        })
    }

    pub fn resistance(&self, x: T) -> T {
        self.r0 + self.dr * x
    }
}

impl<T: Scalar> MemElement<T> for TangentPinchMemristor<T> {
    fn kind(&self) -> ElementKind {
        ElementKind::MemristiveCurrentControlled
    }

    fn state_bounds(&self) -> Vec<Bounds<T>> {
        match self.coupling {
            StateCoupling::Even => vec![Bounds::new(T::zero(), T::infinity())],
            StateCoupling::Odd => vec![Bounds::unbounded()],
        }
    }

    fn initial_state(&self) -> Vec<T> {
        vec![T::zero()]
    }

    fn response(&self, x: &[T], i: T) -> T {
        self.resistance(x[0]) * i
    }

    fn response_slope(&self, x: &[T], _i: T) -> T {
        self.resistance(x[0])
    }

    fn state_rate(&self, x: &[T], i: T, _sweep: Sweep, dx: &mut [T]) {
        let drive = match self.coupling {
            StateCoupling::Even => i.abs(),
            StateCoupling::Odd => i,
        };
        dx[0] = self.beta * (drive / self.i_ref - x[0]);
    }
}
