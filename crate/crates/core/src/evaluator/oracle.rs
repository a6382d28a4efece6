//! Synthetic stand-in for CFD: a smooth map from geometry to (Cp, Cd).
//!
//! ```text
//! Cp = eta_d (1 - (A_in / A_out)^2) - k_c * curvature
//! Cd = c_f * L / D_h + k_s * slope^2 + k_c * curvature
//! ```
//!
//! with `curvature` = [`GeometrySummary::curvature_energy`] and `slope` =
//! [`GeometrySummary::mean_wall_slope`].

use std::path::Path;

use crate::bounds::Bounds;
use crate::error::{Error, Result};
use crate::geometry::{builtin_reference, Design, DesignVector, GeometrySummary, ReferenceGeometry};

use super::coefficients::ObjectivePair;

pub const BUILTIN_ORACLE: &str = include_str!("../../data/oracle.cfg");

/// Objectives the shipped constants reproduce on the reference design.
pub const REFERENCE_OBJECTIVES: ObjectivePair = ObjectivePair { cp: 0.819, cd: 0.131 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConstants {
    /// Diffuser effectiveness.
    pub eta_d: f64,
    /// Friction factor.
    pub c_f: f64,
    /// Wall-slope loss factor.
    pub k_s: f64,
    /// Curvature loss factor.
    pub k_c: f64,
}

impl OracleConstants {
    pub fn validate(&self) -> Result<()> {
        let all = [self.eta_d, self.c_f, self.k_s, self.k_c];
        if all.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidArgument(format!("oracle constants must be finite and non-negative: {self:?}")));
        }
        Ok(())
    }

    /// `key = value` lines; `#` comments; unknown keys are errors.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let (mut eta_d, mut c_f, mut k_s, mut k_c) = (None, None, None, None);
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(origin, i + 1, "expected 'key = value'"))?;
            let (k, v) = (k.trim(), v.trim());
            if k == "version" {
                continue;
            }
            let num: f64 = v.parse().map_err(|_| Error::parse(origin, i + 1, format!("invalid number '{v}'")))?;
            let slot = match k {
                "eta_d" => &mut eta_d,
                "c_f" => &mut c_f,
                "k_s" => &mut k_s,
                "k_c" => &mut k_c,
                _ => return Err(Error::parse(origin, i + 1, format!("unknown key '{k}'"))),
            };
            *slot = Some(num);
        }
        let need = |v: Option<f64>, name: &str| v.ok_or_else(|| Error::parse(origin, 0, format!("missing key '{name}'")));
        let c = Self { eta_d: need(eta_d, "eta_d")?, c_f: need(c_f, "c_f")?, k_s: need(k_s, "k_s")?, k_c: need(k_c, "k_c")? };
        c.validate().map_err(|e| Error::parse(origin, 0, e.to_string()))?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn builtin() -> Self {
        Self::parse(BUILTIN_ORACLE, Path::new("<builtin oracle>")).expect("builtin oracle constants parse")
    }

    pub fn to_config(&self, version: &str) -> String {
        format!(
            "# synthetic oracle constants\nversion = {version}\neta_d = {}\nc_f = {}\nk_s = {}\nk_c = {}\n",
            self.eta_d, self.c_f, self.k_s, self.k_c
        )
    }
}

/// Picks `eta_d` and `c_f` so that `summary` maps exactly onto `target`,
/// keeping the given loss factors.
pub fn calibrate(summary: &GeometrySummary, target: ObjectivePair, k_s: f64, k_c: f64) -> Result<OracleConstants> {
    let ideal = 1.0 - (summary.inlet_area / summary.outlet_area).powi(2);
    if ideal <= 0.0 {
        return Err(Error::DegenerateGeometry("calibration design does not diffuse".into()));
    }
    let curv = k_c * summary.curvature_energy;
    let eta_d = (target.cp + curv) / ideal;
    let c_f = (target.cd - k_s * summary.mean_wall_slope.powi(2) - curv)
        / (summary.centreline_length / summary.mean_hydraulic_diameter);
    let c = OracleConstants { eta_d, c_f, k_s, k_c };
    c.validate()
        .map_err(|_| Error::Numerical(format!("loss factors too large to reach the target: {c:?}")))?;
    Ok(c)
}

pub fn objectives_from_summary(s: &GeometrySummary, c: &OracleConstants) -> Result<ObjectivePair> {
    if !(s.outlet_area > 0.0 && s.mean_hydraulic_diameter > 0.0) {
        return Err(Error::DegenerateGeometry("non-positive outlet area or hydraulic diameter".into()));
    }
    let curv = c.k_c * s.curvature_energy;
    let cp = c.eta_d * (1.0 - (s.inlet_area / s.outlet_area).powi(2)) - curv;
    let cd = c.c_f * s.centreline_length / s.mean_hydraulic_diameter + c.k_s * s.mean_wall_slope.powi(2) + curv;
    if !(cp.is_finite() && cd.is_finite()) {
        return Err(Error::Numerical("oracle produced non-finite objectives".into()));
    }
    Ok(ObjectivePair { cp, cd })
}

pub fn synthetic_cfd(design: &Design, constants: &OracleConstants) -> Result<ObjectivePair> {
    objectives_from_summary(&design.summary()?, constants)
}

/// Reference geometry plus constants; thread-safe and cheap to share.
#[derive(Debug, Clone)]
pub struct Oracle {
    reference: ReferenceGeometry,
    constants: OracleConstants,
}

impl Oracle {
    pub fn new(reference: ReferenceGeometry, constants: OracleConstants) -> Result<Self> {
        constants.validate()?;
        Ok(Self { reference, constants })
    }

    pub fn builtin() -> Self {
        Self { reference: builtin_reference(), constants: OracleConstants::builtin() }
    }

    pub fn reference(&self) -> &ReferenceGeometry {
        &self.reference
    }

    pub fn constants(&self) -> &OracleConstants {
        &self.constants
    }

    pub fn evaluate(&self, x: &DesignVector) -> Result<ObjectivePair> {
        synthetic_cfd(&self.reference.synthesize(x)?, &self.constants)
    }

    /// Evaluates raw offsets checked against `bounds`.
    pub fn evaluate_offsets(&self, x: &[f64], bounds: &Bounds) -> Result<ObjectivePair> {
        self.evaluate(&DesignVector::new(x.to_vec(), bounds.clone())?)
    }

    pub fn evaluate_reference(&self) -> Result<ObjectivePair> {
        synthetic_cfd(&self.reference.design()?, &self.constants)
    }
}
