//! Simulation and analysis of two-terminal memory elements.
//!
//! The crate models memristive and memcapacitive systems as state-space
//! elements ([`models`]), steps them under periodic drives ([`integrator`]),
//! reproduces a series-capacitor charge measurement ([`circuit`]), and
//! classifies the resulting steady loops as pinched (tangent or
//! self-crossing), non-pinched, or hysteresis-free ([`analysis`]).
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`). The
//! aliases at the crate root fix the scalar to `f64`, which is what the
//! command-line front end uses.

pub mod analysis;
pub mod circuit;
pub mod error;
pub mod integrator;
pub mod models;
pub mod roots;
pub mod scalar;
pub mod waveform;

pub use analysis::{
    classify_loop, limit_scan, loop_area, switching_peaks, ClassifierTolerances, HysteresisLoop,
    LimitScan, LoopArea, LoopClassification, Peak, Verdict,
};
pub use circuit::{numeric_current, simulate_series_circuit, SeriesCircuit};
pub use error::{Error, Result};
pub use integrator::{
    integrate, integrate_dynamics, period_distance, steady_loop, Dynamics, IntegratorConfig,
    Method, SeriesMeta, TimeSeries,
};
pub use models::{
    eval_memristive, Bounds, DivergentGMemristor, DivergentParams, DivergentRMemristor,
    ElementKind, FerroParams, FerroelectricMemcapacitor, LinearCapacitor, LinearResistor,
    MemElement, Quantity, StateCoupling, Sweep, TangentPinchMemristor,
};
pub use scalar::Scalar;
pub use waveform::{DriveWaveform, WaveShape};

pub type Drive = DriveWaveform<f64>;
pub type Series = TimeSeries<f64>;
pub type Loop = HysteresisLoop<f64>;
pub type Classification = LoopClassification<f64>;
pub type Tolerances = ClassifierTolerances<f64>;
pub type Config = IntegratorConfig<f64>;
pub type Scan = LimitScan<f64>;
pub type DivergentR = DivergentRMemristor<f64>;
pub type DivergentG = DivergentGMemristor<f64>;
pub type Ferroelectric = FerroelectricMemcapacitor<f64>;
pub type TangentPinch = TangentPinchMemristor<f64>;
