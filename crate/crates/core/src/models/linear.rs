use super::{require_positive, Bounds, ElementKind, MemElement, Sweep};
use crate::error::Result;
use crate::scalar::Scalar;

/// Memoryless resistor `v = r * i`, treated as a current-controlled
/// memristive element with no state.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearResistor<T> {
    pub r: T,
}

impl<T: Scalar> LinearResistor<T> {
    pub fn new(r: T) -> Result<Self> {
        require_positive("r", r)?;
        Ok(Self { r })
    }
}

impl<T: Scalar> MemElement<T> for LinearResistor<T> {
    fn kind(&self) -> ElementKind {
        ElementKind::MemristiveCurrentControlled
    }

    fn state_bounds(&self) -> Vec<Bounds<T>> {
        Vec::new()
    }

    fn initial_state(&self) -> Vec<T> {
        Vec::new()
    }

    fn response(&self, _x: &[T], i: T) -> T {
        self.r * i
    }

    fn response_slope(&self, _x: &[T], _i: T) -> T {
        self.r
    }

    fn state_rate(&self, _x: &[T], _i: T, _sweep: Sweep, _dx: &mut [T]) {}
}

/// Linear capacitor `q = c * v`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearCapacitor<T> {
    pub c: T,
}

impl<T: Scalar> LinearCapacitor<T> {
    pub fn new(c: T) -> Result<Self> {
        require_positive("c", c)?;
        Ok(Self { c })
    }
}

impl<T: Scalar> MemElement<T> for LinearCapacitor<T> {
    fn kind(&self) -> ElementKind {
        ElementKind::Memcapacitive
    }

    fn state_bounds(&self) -> Vec<Bounds<T>> {
        Vec::new()
    }

    fn initial_state(&self) -> Vec<T> {
        Vec::new()
    }

    fn response(&self, _x: &[T], v: T) -> T {
        self.c * v
    }

    fn response_slope(&self, _x: &[T], _v: T) -> T {
        self.c
    }

    fn state_rate(&self, _x: &[T], _v: T, _sweep: Sweep, _dx: &mut [T]) {}
}
