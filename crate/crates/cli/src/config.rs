//! Flat `key = value` run configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use memsim_core::{
    Config, DivergentG, DivergentParams, DivergentR, Drive, ElementKind, Ferroelectric,
    FerroParams, LinearCapacitor, LinearResistor, MemElement, Quantity, StateCoupling,
    TangentPinch, Tolerances, WaveShape,
};

use crate::presets;
use crate::CliError;

/// Which plane the steady loop is drawn in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Plane {
    /// Input against the element's own response (`v`-`i`, `i`-`v` or `q`-`v`).
    Response,
    /// Input against the numerically differentiated response (`I`-`V` for a
    /// charge-controlled element).
    Current,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DeviceSpec {
    DivergentR(DivergentParams<f64>),
    DivergentG(DivergentParams<f64>),
    Ferroelectric { params: FerroParams<f64>, p0: f64 },
    LinearCapacitor(f64),
    LinearResistor(f64),
    TangentPinch { r0: f64, dr: f64, beta: f64, i_ref: f64, coupling: StateCoupling },
}

impl DeviceSpec {
    pub fn name(&self) -> &'static str {
        match self {
            DeviceSpec::DivergentR(_) => "divergent-r",
            DeviceSpec::DivergentG(_) => "divergent-g",
            DeviceSpec::Ferroelectric { .. } => "ferroelectric",
            DeviceSpec::LinearCapacitor(_) => "linear-capacitor",
            DeviceSpec::LinearResistor(_) => "linear-resistor",
            DeviceSpec::TangentPinch { .. } => "tangent-pinch",
        }
    }

    pub fn kind(&self) -> ElementKind {
        match self {
            DeviceSpec::DivergentR(_) | DeviceSpec::LinearResistor(_) | DeviceSpec::TangentPinch { .. } => {
                ElementKind::MemristiveCurrentControlled
            }
            DeviceSpec::DivergentG(_) => ElementKind::MemristiveVoltageControlled,
            DeviceSpec::Ferroelectric { .. } | DeviceSpec::LinearCapacitor(_) => ElementKind::Memcapacitive,
        }
    }

    pub fn build(&self) -> Result<Box<dyn MemElement<f64>>, memsim_core::Error> {
        Ok(match *self {
            DeviceSpec::DivergentR(p) => Box::new(DivergentR::new(p)?),
            DeviceSpec::DivergentG(p) => Box::new(DivergentG::new(p)?),
            DeviceSpec::Ferroelectric { params, p0 } => {
                Box::new(Ferroelectric::new(params)?.with_initial_polarization(p0)?)
            }
            DeviceSpec::LinearCapacitor(c) => Box::new(LinearCapacitor::new(c)?),
            DeviceSpec::LinearResistor(r) => Box::new(LinearResistor::new(r)?),
            DeviceSpec::TangentPinch { r0, dr, beta, i_ref, coupling } => {
                Box::new(TangentPinch::with_coupling(r0, dr, beta, i_ref, coupling)?)
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub device: DeviceSpec,
    /// Standard capacitor in series with the device; `None` drives the device
    /// directly.
    pub c_std: Option<f64>,
    pub drive: Drive,
    pub integrator: Config,
    pub tolerances: Tolerances,
    pub plane: Plane,
    /// Moving-average window applied to the differentiated charge.
    pub smoothing: usize,
    /// Decades for the small-signal exponent scan; 0 disables it.
    pub scan_decades: usize,
    /// Threshold, in medians of `|I|`, for a switching peak.
    pub peak_factor: f64,
    pub svg: bool,
    /// The parsed key-value pairs, echoed in reports.
    pub entries: BTreeMap<String, String>,
}

/// Raw key-value pairs in file order, before interpretation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawConfig {
    pub entries: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::input(format!("line {}: expected `key = value`", n + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() || v.is_empty() {
                return Err(CliError::input(format!("line {}: empty key or value", n + 1)));
            }
            if entries.insert(k.to_string(), v.to_string()).is_some() {
                return Err(CliError::input(format!("line {}: duplicate key `{k}`", n + 1)));
            }
        }
        Ok(Self { entries })
    }

    /// Reads `source` as a file path, or as the name of a built-in preset
    /// when no such file exists.
    pub fn load(source: &str) -> Result<Self, CliError> {
        let path = Path::new(source);
        if path.exists() {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            return Self::parse(&text);
        }
        match presets::get(source) {
            Some(text) => Self::parse(text),
            None => Err(CliError::input(format!(
                "`{source}` is neither a file nor a preset (presets: {})",
                presets::names().join(", ")
            ))),
        }
    }

    pub fn set(&mut self, key: &str, value: &str) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    pub fn interpret(&self) -> Result<RunConfig, CliError> {
        let mut f = Fields {
            left: self.entries.clone(),
        };
        let device = match f.take_str("device")?.as_deref() {
            Some("divergent-r") => DeviceSpec::DivergentR(divergent(&mut f, "A")?),
            Some("divergent-g") => DeviceSpec::DivergentG(divergent(&mut f, "V")?),
            Some("ferroelectric") => {
                let d = FerroParams::default();
                let params = FerroParams {
                    p_s: f.num("device.p_s", d.p_s)?,
                    p_r: f.num("device.p_r", d.p_r)?,
                    e_c: f.num("device.e_c", d.e_c)?,
                    eps_r: f.num("device.eps_r", d.eps_r)?,
                    thickness: f.num("device.thickness", d.thickness)?,
                    area: f.num("device.area", d.area)?,
                    tau: f.num("device.tau", d.tau)?,
                };
                let p0 = f.num("device.p0", 0.0)?;
                DeviceSpec::Ferroelectric { params, p0 }
            }
            Some("linear-capacitor") => DeviceSpec::LinearCapacitor(f.required("device.capacitance")?),
            Some("linear-resistor") => DeviceSpec::LinearResistor(f.required("device.resistance")?),
            Some("tangent-pinch") => DeviceSpec::TangentPinch {
                r0: f.num("device.r0", 100.0)?,
                dr: f.num("device.dr", 100.0)?,
                beta: f.num("device.beta", std::f64::consts::TAU)?,
                i_ref: f.num("device.i_ref", 1e-3)?,
                coupling: f.parsed("device.coupling", Coupling(StateCoupling::Even))?.0,
            },
            Some(other) => return Err(CliError::input(format!("unknown device `{other}`"))),
            None => return Err(CliError::input("missing key `device`")),
        };

        let c_std = match f.take_str("circuit")?.as_deref() {
            None | Some("direct") => None,
            Some("series") => Some(f.required("circuit.c_std")?),
            Some(other) => return Err(CliError::input(format!("unknown circuit `{other}` (direct|series)"))),
        };
        if c_std.is_some() && device.kind() != ElementKind::Memcapacitive {
            return Err(CliError::input("circuit = series needs a memcapacitive device"));
        }

        let quantity = if c_std.is_some() { Quantity::Voltage } else { device.kind().input() };
        let shape = f.parsed("drive.shape", Shape(WaveShape::Sinusoidal))?.0;
        let drive = Drive {
            phase: f.num("drive.phase", 0.0)?,
            offset: f.num("drive.offset", 0.0)?,
            ..Drive::new(shape, quantity, f.required("drive.amplitude")?, f.required("drive.frequency")?)
        };
        drive.validate()?;

        let periods = f.int("integrator.periods", 4)?;
        let mut integrator = match f.take_str("integrator.method")?.as_deref() {
            None | Some("rk4") => {
                if f.left.contains_key("integrator.dt") {
                    Config::rk4(f.required("integrator.dt")?, periods)
                } else {
                    Config::rk4_per_period(&drive, f.int("integrator.steps_per_period", 1024)?, periods)
                }
            }
            Some("rk45") => {
                let period = drive.period();
                Config::adaptive(
                    f.num("integrator.rtol", 1e-8)?,
                    f.num("integrator.atol", 1e-12)?,
                    f.num("integrator.dt_min", period * 1e-12)?,
                    f.num("integrator.dt_max", period / 64.0)?,
                    periods,
                )
            }
            Some(other) => return Err(CliError::input(format!("unknown integrator `{other}` (rk4|rk45)"))),
        };
        integrator = integrator.with_steady_tol(f.num("integrator.steady_tol", 1e-3)?);
        integrator.validate()?;

        let d = Tolerances::default();
        let tolerances = Tolerances {
            gap_tol: f.num("classify.gap_tol", d.gap_tol)?,
            slope_tol: f.num("classify.slope_tol", d.slope_tol)?,
            area_tol: f.num("classify.area_tol", d.area_tol)?,
        };
        tolerances.validate()?;

        let plane = match f.take_str("analysis.plane")?.as_deref() {
            None | Some("response") => Plane::Response,
            Some("current") => Plane::Current,
            Some(other) => return Err(CliError::input(format!("unknown plane `{other}` (response|current)"))),
        };
        if plane == Plane::Current && device.kind() != ElementKind::Memcapacitive {
            return Err(CliError::input("analysis.plane = current needs a memcapacitive device"));
        }
        let smoothing = f.int("analysis.smoothing", 1)?;
        if smoothing == 0 {
            return Err(CliError::input("analysis.smoothing must be at least 1"));
        }
        let peak_factor = f.num("analysis.peak_factor", 5.0)?;
        if !(peak_factor > 0.0) {
            return Err(CliError::input("analysis.peak_factor must be > 0"));
        }
        let scan_decades = if device.kind().is_memristive() && c_std.is_none() {
            f.int("limit_scan.decades", 0)?
        } else {
            0
        };
        if scan_decades == 1 {
            return Err(CliError::input("limit_scan.decades must be 0 (off) or at least 2"));
        }
        let svg = f.parsed("output.svg", Flag(false))?.0;

        if let Some(k) = f.left.keys().next() {
            return Err(CliError::input(format!(
                "unknown or inapplicable key `{k}` for device {}",
                device.name()
            )));
        }
        device.build()?;
        Ok(RunConfig {
            device,
            c_std,
            drive,
            integrator,
            tolerances,
            plane,
            smoothing,
            scan_decades,
            peak_factor,
            svg,
            entries: self.entries.clone(),
        })
    }
}

fn divergent(f: &mut Fields, unit: &str) -> Result<DivergentParams<f64>, CliError> {
    let d = DivergentParams::default();
    let default_ref = if unit == "V" { 1.0 } else { d.drive_ref };
    let p = DivergentParams {
        g0: f.num("device.g0", d.g0)?,
        alpha: f.num("device.alpha", d.alpha)?,
        beta: f.num("device.beta", d.beta)?,
        drive_ref: f.num("device.drive_ref", default_ref)?,
        x0: f.num("device.x0", d.x0)?,
    };
    p.validate()?;
    Ok(p)
}

/// Consumes keys so leftovers can be reported as unknown.
struct Fields {
    left: BTreeMap<String, String>,
}

impl Fields {
    fn take_str(&mut self, key: &str) -> Result<Option<String>, CliError> {
        Ok(self.left.remove(key))
    }

    fn parsed<T: FromStr>(&mut self, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: fmt::Display,
    {
        match self.left.remove(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|e| CliError::input(format!("`{key} = {v}`: {e}"))),
        }
    }

    fn num(&mut self, key: &str, default: f64) -> Result<f64, CliError> {
        let v: f64 = self.parsed(key, default)?;
        if !v.is_finite() {
            return Err(CliError::input(format!("`{key}` must be finite")));
        }
        Ok(v)
    }

    fn required(&mut self, key: &str) -> Result<f64, CliError> {
        if !self.left.contains_key(key) {
            return Err(CliError::input(format!("missing key `{key}`")));
        }
        self.num(key, 0.0)
    }

    fn int(&mut self, key: &str, default: usize) -> Result<usize, CliError> {
        self.parsed(key, default)
    }
}

struct Coupling(StateCoupling);

impl FromStr for Coupling {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "even" => Ok(Coupling(StateCoupling::Even)),
            "odd" => Ok(Coupling(StateCoupling::Odd)),
            _ => Err("expected even or odd".into()),
        }
    }
}

struct Shape(WaveShape);

impl FromStr for Shape {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "triangular" => Ok(Shape(WaveShape::Triangular)),
            "sinusoidal" => Ok(Shape(WaveShape::Sinusoidal)),
            _ => Err("expected triangular or sinusoidal".into()),
        }
    }
}

struct Flag(bool);

impl FromStr for Flag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "true" | "yes" | "1" => Ok(Flag(true)),
            "false" | "no" | "0" => Ok(Flag(false)),
            _ => Err("expected true or false".into()),
        }
    }
}
