use crate::error::{Error, Result};

/// Pressures in Pa, density in kg/m³, inlet reference velocity in m/s.
/// Index 1 is the inlet, 2 the outlet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowProbe {
    pub p_s1: f64,
    pub p_s2: f64,
    pub p_t1: f64,
    pub p_t2: f64,
    pub rho: f64,
    pub u: f64,
}

impl FlowProbe {
    pub fn validate(&self) -> Result<()> {
        let all = [self.p_s1, self.p_s2, self.p_t1, self.p_t2, self.rho, self.u];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("flow probe has non-finite values".into()));
        }
        if self.rho <= 0.0 || self.u <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "flow probe needs rho > 0 and u > 0 (rho = {}, u = {})",
                self.rho, self.u
            )));
        }
        Ok(())
    }

    pub fn dynamic_pressure(&self) -> f64 {
        0.5 * self.rho * self.u * self.u
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectivePair {
    pub cp: f64,
    pub cd: f64,
}

impl ObjectivePair {
    pub fn new(cp: f64, cd: f64) -> Self {
        Self { cp, cd }
    }

    /// Minimization form `(-Cp, Cd)`.
    pub fn minimized(&self) -> [f64; 2] {
        [-self.cp, self.cd]
    }

    pub fn from_minimized(f: [f64; 2]) -> Self {
        Self { cp: -f[0], cd: f[1] }
    }

    pub fn improves_on(&self, other: &ObjectivePair) -> bool {
        self.cp > other.cp && self.cd < other.cd
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DragCoefficient {
    pub value: f64,
    /// Set when the total pressure rises through the duct.
    pub non_physical: bool,
}

pub fn pressure_recovery(probe: &FlowProbe) -> Result<f64> {
    probe.validate()?;
    Ok((probe.p_s2 - probe.p_s1) / probe.dynamic_pressure())
}

pub fn drag_coefficient(probe: &FlowProbe) -> Result<DragCoefficient> {
    probe.validate()?;
    let value = (probe.p_t1 - probe.p_t2) / probe.dynamic_pressure();
    Ok(DragCoefficient { value, non_physical: value < 0.0 })
}

pub fn coefficients(probe: &FlowProbe) -> Result<(ObjectivePair, bool)> {
    let cd = drag_coefficient(probe)?;
    Ok((ObjectivePair::new(pressure_recovery(probe)?, cd.value), cd.non_physical))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn probe(ds: f64, dt: f64) -> FlowProbe {
        FlowProbe { p_s1: 1.0e5, p_s2: 1.0e5 + ds, p_t1: 1.2e5, p_t2: 1.2e5 - dt, rho: 1000.0, u: 2.0 }
    }

    #[test]
    fn hand_computed_values() {
        assert_eq!(pressure_recovery(&probe(0.0, 0.0)).unwrap(), 0.0);
        assert_eq!(pressure_recovery(&probe(2000.0, 0.0)).unwrap(), 1.0);
        assert_eq!(drag_coefficient(&probe(0.0, 0.0)).unwrap().value, 0.0);
    }

    #[test]
    fn substitution_examples() {
        assert!((pressure_recovery(&probe(1626.0, 0.0)).unwrap() - 0.813).abs() < 1e-12);
        let cd = drag_coefficient(&probe(0.0, 218.0)).unwrap();
        assert!((cd.value - 0.109).abs() < 1e-12);
        assert!(!cd.non_physical);
    }

    #[test]
    fn negative_loss_is_flagged() {
        let cd = drag_coefficient(&probe(0.0, -50.0)).unwrap();
        assert!(cd.value < 0.0 && cd.non_physical);
    }

    #[test]
    fn zero_density_or_velocity() {
        let mut p = probe(1.0, 1.0);
        p.u = 0.0;
        assert!(pressure_recovery(&p).is_err());
        p.u = 2.0;
        p.rho = 0.0;
        assert!(drag_coefficient(&p).is_err());
    }

    #[test]
    fn scale_invariance() {
        let p = probe(1626.0, 218.0);
        let k = 3.7;
        // scaling rho by k scales the dynamic pressure by k
        let q = FlowProbe {
            p_s1: p.p_s1 * k,
            p_s2: p.p_s2 * k,
            p_t1: p.p_t1 * k,
            p_t2: p.p_t2 * k,
            rho: p.rho * k,
            u: p.u,
        };
        let (a, _) = coefficients(&p).unwrap();
        let (b, _) = coefficients(&q).unwrap();
        assert!((a.cp - b.cp).abs() < 1e-12 && (a.cd - b.cd).abs() < 1e-12);
    }
}
