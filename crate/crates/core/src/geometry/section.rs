use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectionKind {
    /// Radius `w`; `h` is ignored for area and perimeter.
    Circular,
    /// Semi-axes `w` and `h`.
    Ellipsoidal,
    /// `2w x 2h` rectangle with roof corners of radius `r_r` and floor corners of radius `r_f`.
    RoundedRectangle,
}

impl SectionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SectionKind::Circular => "circular",
            SectionKind::Ellipsoidal => "ellipsoidal",
            SectionKind::RoundedRectangle => "rounded-rectangle",
        }
    }
}

impl fmt::Display for SectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SectionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "circular" => Ok(SectionKind::Circular),
            "ellipsoidal" => Ok(SectionKind::Ellipsoidal),
            "rounded-rectangle" => Ok(SectionKind::RoundedRectangle),
            other => Err(Error::InvalidArgument(format!("unknown section kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossSection {
    /// Horizontal semi-axis (radius for circular sections), m.
    pub w: f64,
    /// Vertical semi-axis, m.
    pub h: f64,
    pub roof_radius: f64,
    pub floor_radius: f64,
    /// Distance along the centreline, m.
    pub station: f64,
    /// Direction of the centreline tangent, rad from +x.
    pub angle: f64,
    pub kind: SectionKind,
}

impl CrossSection {
    pub fn validate(&self) -> Result<()> {
        let all = [self.w, self.h, self.roof_radius, self.floor_radius, self.station, self.angle];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::DegenerateGeometry("non-finite cross-section value".into()));
        }
        if self.w <= 0.0 || self.h <= 0.0 {
            return Err(Error::DegenerateGeometry(format!(
                "section at station {:.4}: w = {}, h = {} must be positive",
                self.station, self.w, self.h
            )));
        }
        let limit = self.w.min(self.h) * (1.0 + 1e-12);
        if self.roof_radius < 0.0 || self.floor_radius < 0.0 || self.roof_radius > limit || self.floor_radius > limit {
            return Err(Error::DegenerateGeometry(format!(
                "section at station {:.4}: corner radii ({}, {}) outside [0, min(w, h)]",
                self.station, self.roof_radius, self.floor_radius
            )));
        }
        Ok(())
    }

    pub fn area(&self) -> f64 {
        match self.kind {
            SectionKind::Circular => PI * self.w * self.w,
            SectionKind::Ellipsoidal => PI * self.w * self.h,
            SectionKind::RoundedRectangle => {
                // each rounded corner removes r^2 (1 - pi/4); two corners per radius
                4.0 * self.w * self.h
                    - (4.0 - PI) * (self.roof_radius.powi(2) + self.floor_radius.powi(2)) / 2.0
            }
        }
    }

    pub fn perimeter(&self) -> f64 {
        match self.kind {
            SectionKind::Circular => 2.0 * PI * self.w,
            SectionKind::Ellipsoidal => {
                // Ramanujan's second approximation
                let (a, b) = (self.w, self.h);
                let hh = ((a - b) / (a + b)).powi(2);
                PI * (a + b) * (1.0 + 3.0 * hh / (10.0 + (4.0 - 3.0 * hh).sqrt()))
            }
            SectionKind::RoundedRectangle => {
                4.0 * (self.w + self.h) + (PI - 4.0) * (self.roof_radius + self.floor_radius)
            }
        }
    }

    pub fn hydraulic_diameter(&self) -> f64 {
        4.0 * self.area() / self.perimeter()
    }

    /// Radius of the circle with the same area.
    pub fn equivalent_radius(&self) -> f64 {
        (self.area() / PI).sqrt()
    }
}
