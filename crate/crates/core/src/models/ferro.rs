use super::{require_positive, Bounds, ElementKind, MemElement, Sweep};
use crate::error::{invalid, Result};
use crate::scalar::{lit, Scalar};

/// Vacuum permittivity, F/m.
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;

/// Material and geometry of a ferroelectric film capacitor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FerroParams<T> {
    /// Saturation polarization, C/m^2.
    pub p_s: T,
    /// Remanent polarization, C/m^2; `0 < p_r < p_s`.
    pub p_r: T,
    /// Coercive field, V/m.
    pub e_c: T,
    /// Relative permittivity of the linear background.
    pub eps_r: T,
    /// Film thickness, m.
    pub thickness: T,
    /// Plate area, m^2.
    pub area: T,
    /// Polarization relaxation time, s.
    pub tau: T,
}

/// PZT-like constants on a 255 nm film with a 10^5 um^2 plate.
impl<T: Scalar> Default for FerroParams<T> {
    fn default() -> Self {
        Self {
            p_s: lit(0.30),
            p_r: lit(0.20),
            e_c: lit(5e6),
            eps_r: lit(300.0),
            thickness: lit(255e-9),
            area: lit(1e-7),
            tau: lit(10e-6),
        }
    }
}

impl<T: Scalar> FerroParams<T> {
    pub fn validate(&self) -> Result<()> {
        require_positive("p_s", self.p_s)?;
        require_positive("p_r", self.p_r)?;
        if self.p_r >= self.p_s {
            return Err(invalid("p_r", "must be strictly below p_s"));
        }
        require_positive("e_c", self.e_c)?;
        if !(self.eps_r.is_finite() && self.eps_r >= T::one()) {
            return Err(invalid("eps_r", "must be finite and >= 1"));
        }
        require_positive("thickness", self.thickness)?;
        require_positive("area", self.area)?;
        require_positive("tau", self.tau)?;
        let d = self.delta();
        if !(d.is_finite() && d > T::zero()) {
            return Err(invalid("p_r", "branch width is not finite"));
        }
        Ok(())
    }

    /// Branch width `e_c / ln((1 + p_r/p_s) / (1 - p_r/p_s))`, chosen so the
    /// branches pass through `+-p_r` at zero field.
    pub fn delta(&self) -> T {
        let m = self.p_r / self.p_s;
        self.e_c / ((T::one() + m) / (T::one() - m)).ln()
    }

    /// Background capacitance `eps0 * eps_r * area / thickness`.
    pub fn linear_capacitance(&self) -> T {
        lit::<T>(VACUUM_PERMITTIVITY) * self.eps_r * self.area / self.thickness
    }
}

/// Ferroelectric capacitor as a memcapacitive system.
///
/// State is the switched polarization `P`. Charge is
/// `q = C_lin * v + area * P`. The polarization relaxes with time constant
/// `tau` toward the tanh branch selected by the sweep direction:
/// `P_branch(E, rising) = p_s * tanh((E - e_c) / (2 delta))` and the falling
/// branch with `+e_c`. Because `P` is not a function of `v` alone, the `q-v`
/// loop crosses `v = 0` at `q = +-area * P` and is not pinched.
#[derive(Clone, Debug, PartialEq)]
pub struct FerroelectricMemcapacitor<T> {
    params: FerroParams<T>,
    c_lin: T,
    delta: T,
    initial: T,
}

impl<T: Scalar> FerroelectricMemcapacitor<T> {
    /// Builds an unpoled (`P = 0`) capacitor.
    pub fn new(params: FerroParams<T>) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            c_lin: params.linear_capacitance(),
            delta: params.delta(),
            params,
            initial: T::zero(),
        })
    }

    /// Starts from polarization `p0` instead of the unpoled state.
    pub fn with_initial_polarization(mut self, p0: T) -> Result<Self> {
        if !(p0.abs() <= self.params.p_s) {
            return Err(invalid("p0", "must satisfy |p0| <= p_s"));
        }
        self.initial = p0;
        Ok(self)
    }

    pub fn params(&self) -> &FerroParams<T> {
        &self.params
    }

    pub fn linear_capacitance(&self) -> T {
        self.c_lin
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    /// Polarization the film relaxes toward at field `e` while sweeping in
    /// direction `sweep`.
    pub fn branch_target(&self, e: T, sweep: Sweep) -> T {
        let shift = match sweep {
            Sweep::Rising => -self.params.e_c,
            Sweep::Falling => self.params.e_c,
        };
        self.params.p_s * ((e + shift) / (self.delta + self.delta)).tanh()
    }
}

impl<T: Scalar> MemElement<T> for FerroelectricMemcapacitor<T> {
    fn kind(&self) -> ElementKind {
        ElementKind::Memcapacitive
    }

    fn state_bounds(&self) -> Vec<Bounds<T>> {
        vec![Bounds::new(-self.params.p_s, self.params.p_s)]
    }

    fn initial_state(&self) -> Vec<T> {
        vec![self.initial]
    }

    fn response(&self, x: &[T], v: T) -> T {
        self.c_lin * v + self.params.area * x[0]
    }

    fn response_slope(&self, _x: &[T], _v: T) -> T {
        self.c_lin
    }

    fn state_rate(&self, x: &[T], v: T, sweep: Sweep, dx: &mut [T]) {
        let e = v / self.params.thickness;
        dx[0] = (self.branch_target(e, sweep) - x[0]) / self.params.tau;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branches_pass_through_remanence() {
        let f = FerroelectricMemcapacitor::new(FerroParams::<f64>::default()).unwrap();
        let p_r = f.params().p_r;
        assert!((f.branch_target(0.0, Sweep::Rising) + p_r).abs() < 1e-15);
        assert!((f.branch_target(0.0, Sweep::Falling) - p_r).abs() < 1e-15);
        // at the coercive field the rising branch switches sign
        assert!(f.branch_target(f.params().e_c, Sweep::Rising).abs() < 1e-15);
    }

    #[test]
    fn default_geometry() {
        let p = FerroParams::<f64>::default();
        // 255 nm film, 1e5 um^2 = 1e-7 m^2
        assert_eq!(p.thickness, 255e-9);
        assert_eq!(p.area, 1e-7);
        let c = p.linear_capacitance();
        assert!((c - 8.854_187_812_8e-12 * 300.0 * 1e-7 / 255e-9).abs() < 1e-24);
        assert!((p.delta() - 5e6 / 5f64.ln()).abs() < 1e-6);
    }

    #[test]
    fn unpoled_rest_state_holds_no_charge() {
        let f = FerroelectricMemcapacitor::new(FerroParams::<f64>::default()).unwrap();
        let x = f.initial_state();
        assert_eq!(f.response(&x, 0.0), 0.0);
    }

    #[test]
    fn static_field_saturates() {
        let f = FerroelectricMemcapacitor::new(FerroParams::<f64>::default()).unwrap();
        let p = *f.params();
        let v = 40.0 * p.e_c * p.thickness;
        let target = f.branch_target(v / p.thickness, Sweep::Rising);
        assert!((target - p.p_s).abs() < 1e-12);
        // the fixed point of the relaxation is the branch target
        let mut dx = [0.0];
        f.state_rate(&[target], v, Sweep::Rising, &mut dx);
        assert_eq!(dx[0], 0.0);
        let q = f.response(&[target], v);
        let expect = f.linear_capacitance() * v + p.area * p.p_s;
        assert!((q - expect).abs() <= 1e-12 * expect);
    }

    #[test]
    fn rejects_remanence_above_saturation() {
        let p = FerroParams::<f64> {
            p_r: 0.3,
            ..Default::default()
        };
        assert!(FerroelectricMemcapacitor::new(p).is_err());
        let p = FerroParams::<f64> {
            eps_r: 0.5,
            ..Default::default()
        };
        assert!(FerroelectricMemcapacitor::new(p).is_err());
        let f = FerroelectricMemcapacitor::new(FerroParams::<f64>::default()).unwrap();
        assert!(f.with_initial_polarization(0.31).is_err());
    }
}
