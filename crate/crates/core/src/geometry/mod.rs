//! Draft tube geometry: B-spline curves, cross-sections, and synthesis of
//! designs from control-point offsets.

pub mod bspline;
pub mod design;
pub mod io;
pub mod section;

use std::path::Path;
use std::sync::OnceLock;

pub use bspline::{basis, fit_curve, BSplineCurve, FitOptions, FitResult, Parameterization, Point2};
pub use design::{Design, DesignVector, GeometrySummary, ReferenceGeometry, ReferenceSection};
pub use section::{CrossSection, SectionKind};

use crate::error::Result;

pub const BUILTIN_SECTIONS: &str = include_str!("../../data/reference_sections.csv");
pub const BUILTIN_CURVES: &str = include_str!("../../data/reference_curves.txt");
/// Version tag of the shipped reference data.
pub const BUILTIN_VERSION: &str = "synthetic-elbow-1";

/// The shipped synthetic reference draft tube (circular inlet of 2.2 m
/// diameter, elbow, rounded-rectangle outlet), sampled at 84 stations.
pub fn builtin_reference() -> ReferenceGeometry {
    static REFERENCE: OnceLock<ReferenceGeometry> = OnceLock::new();
    REFERENCE
        .get_or_init(|| {
            let curves = io::parse_curves(BUILTIN_CURVES, Path::new("<builtin curves>")).expect("builtin curves parse");
            let sections =
                io::parse_sections(BUILTIN_SECTIONS, Path::new("<builtin sections>")).expect("builtin sections parse");
            ReferenceGeometry::new(curves.roof, curves.floor, curves.width, sections, design::DEFAULT_STATIONS)
                .expect("builtin reference is valid")
        })
        .clone()
}

/// Design for offsets `x` applied to `reference`.
pub fn synthesize(reference: &ReferenceGeometry, x: &DesignVector) -> Result<Design> {
    reference.synthesize(x)
}

/// Inlet/outlet areas, centreline length and wall slope of a design.
pub fn areas(design: &Design) -> Result<GeometrySummary> {
    design.summary()
}
