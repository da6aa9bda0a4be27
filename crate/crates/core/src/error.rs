use thiserror::Error;

use crate::models::{ElementKind, Quantity};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("state component {component} = {value} outside [{lo}, {hi}]")]
    StateOutOfBounds {
        component: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("state vector has {found} components, element expects {expected}")]
    StateDimension { expected: usize, found: usize },

    #[error("{kind:?} element cannot be driven by a {drive:?} source")]
    DriveMismatch { kind: ElementKind, drive: Quantity },

    #[error("operation requires a {expected} element, got {found:?}")]
    WrongKind {
        expected: &'static str,
        found: ElementKind,
    },

    #[error("adaptive step underflow at t = {t} s (step {dt} s below dt_min)")]
    StepUnderflow { t: f64, dt: f64 },

    #[error("state became non-finite at t = {t} s")]
    NonFinite { t: f64 },

    #[error("steady state not reached: period-to-period distance {distance:.3e} >= tolerance {tol:.3e}")]
    NotConverged { distance: f64, tol: f64 },

    #[error("time series spans {spanned:.3} periods, need at least {needed}")]
    TooShort { spanned: f64, needed: f64 },

    #[error("device voltage not bracketed in [{lo}, {hi}] V at t = {t} s")]
    RootNotBracketed { t: f64, lo: f64, hi: f64 },

    #[error("device voltage solve stalled at t = {t} s with residual {residual:.3e}")]
    RootNotConverged { t: f64, residual: f64 },

    #[error("malformed time series: {0}")]
    Series(String),

    #[error("need at least {needed} points, got {found}")]
    TooFewPoints { needed: usize, found: usize },

    #[error("loop is not closed (first point differs from last)")]
    OpenLoop,

    #[error("time grid is not uniform; resample before differentiating")]
    NonUniformGrid,
}

impl Error {
    /// True for failures of the numerics on valid input (step underflow,
    /// blow-up, no steady state, root solve), false for bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::StepUnderflow { .. }
                | Error::NonFinite { .. }
                | Error::NotConverged { .. }
                | Error::RootNotBracketed { .. }
                | Error::RootNotConverged { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
