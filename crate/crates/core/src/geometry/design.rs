use crate::bounds::Bounds;
use crate::error::{Error, Result};

use super::bspline::{BSplineCurve, Point2};
use super::section::{CrossSection, SectionKind};

pub const ROOF_POINTS: usize = 9;
pub const FLOOR_POINTS: usize = 9;
pub const WIDTH_POINTS: usize = 6;
/// Leading control points of every curve that never move.
pub const FIXED_POINTS: usize = 2;
pub const ROOF_VARS: usize = ROOF_POINTS - FIXED_POINTS;
pub const FLOOR_VARS: usize = FLOOR_POINTS - FIXED_POINTS;
pub const WIDTH_VARS: usize = WIDTH_POINTS - FIXED_POINTS;
/// Roof and floor offsets only.
pub const DIM_FIXED_WIDTH: usize = ROOF_VARS + FLOOR_VARS;
/// Roof, floor and width offsets.
pub const DIM_FREE_WIDTH: usize = DIM_FIXED_WIDTH + WIDTH_VARS;
pub const DEFAULT_STATIONS: usize = 84;

/// One tabulated cross-section of the reference duct.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSection {
    pub station: f64,
    pub w: f64,
    pub h: f64,
    pub roof_radius: f64,
    pub floor_radius: f64,
    pub angle: f64,
    pub kind: SectionKind,
}

impl ReferenceSection {
    fn relative_radii(&self) -> (f64, f64) {
        let m = self.w.min(self.h);
        (self.roof_radius / m, self.floor_radius / m)
    }
}

/// The reference draft tube: side-view roof and floor curves, the width
/// curve `(station fraction, half-width)`, and the tabulated sections that
/// supply corner radii and section kinds.
#[derive(Debug, Clone)]
pub struct ReferenceGeometry {
    roof: BSplineCurve,
    floor: BSplineCurve,
    width: BSplineCurve,
    sections: Vec<ReferenceSection>,
    section_params: Vec<f64>,
    stations: usize,
}

impl ReferenceGeometry {
    pub fn new(
        roof: BSplineCurve,
        floor: BSplineCurve,
        width: BSplineCurve,
        sections: Vec<ReferenceSection>,
        stations: usize,
    ) -> Result<Self> {
        for (name, curve, n) in [("roof", &roof, ROOF_POINTS), ("floor", &floor, FLOOR_POINTS), ("width", &width, WIDTH_POINTS)] {
            if curve.control_points().len() != n {
                return Err(Error::InvalidArgument(format!(
                    "{name} curve needs exactly {n} control points, got {}",
                    curve.control_points().len()
                )));
            }
        }
        if roof.knots() != floor.knots() || roof.order() != floor.order() {
            return Err(Error::InvalidArgument("roof and floor curves must share order and knots".into()));
        }
        if roof.domain() != width.domain() {
            return Err(Error::InvalidArgument("width curve must share the roof/floor parameter domain".into()));
        }
        if stations < 2 {
            return Err(Error::InvalidArgument("at least two stations are required".into()));
        }
        if sections.len() < 2 {
            return Err(Error::InvalidArgument("at least two reference sections are required".into()));
        }
        if sections.windows(2).any(|w| w[1].station <= w[0].station) {
            return Err(Error::InvalidArgument("reference sections must have increasing stations".into()));
        }
        for s in &sections {
            let cs = CrossSection {
                w: s.w,
                h: s.h,
                roof_radius: s.roof_radius,
                floor_radius: s.floor_radius,
                station: s.station,
                angle: s.angle,
                kind: s.kind,
            };
            cs.validate()?;
        }

        let centre = centreline(&roof, &floor)?;
        let table = ArcTable::new(&centre, 4096);
        let total = table.total();
        let first = sections[0].station;
        let last = sections[sections.len() - 1].station;
        if first.abs() > 1e-3 * total || (last - total).abs() > 1e-3 * total {
            return Err(Error::InvalidArgument(format!(
                "reference sections must span the centreline [0, {total:.4}] m, got [{first}, {last}]"
            )));
        }
        let section_params = sections
            .iter()
            .enumerate()
            .map(|(i, s)| {
                if i == 0 {
                    table.t_min()
                } else if i == sections.len() - 1 {
                    table.t_max()
                } else {
                    table.param_at(s.station)
                }
            })
            .collect();

        let geometry = Self { roof, floor, width, sections, section_params, stations };
        // the reference itself must be a valid duct
        geometry.build(geometry.roof.clone(), geometry.floor.clone(), geometry.width.clone())?;
        Ok(geometry)
    }

    pub fn roof(&self) -> &BSplineCurve {
        &self.roof
    }

    pub fn floor(&self) -> &BSplineCurve {
        &self.floor
    }

    pub fn width(&self) -> &BSplineCurve {
        &self.width
    }

    pub fn sections(&self) -> &[ReferenceSection] {
        &self.sections
    }

    pub fn stations(&self) -> usize {
        self.stations
    }

    pub fn with_stations(mut self, stations: usize) -> Result<Self> {
        if stations < 2 {
            return Err(Error::InvalidArgument("at least two stations are required".into()));
        }
        self.stations = stations;
        Ok(self)
    }

    /// The unmodified reference as a design.
    pub fn design(&self) -> Result<Design> {
        self.build(self.roof.clone(), self.floor.clone(), self.width.clone())
    }

    /// Section kind and relative corner radii `r / min(w, h)` at curve parameter `t`,
    /// linearly interpolated between the bracketing reference sections.
    fn section_template(&self, t: f64) -> (SectionKind, f64, f64) {
        let p = &self.section_params;
        let idx = p.partition_point(|&pt| pt <= t);
        if idx == 0 {
            let (a, b) = self.sections[0].relative_radii();
            return (self.sections[0].kind, a, b);
        }
        if idx >= p.len() {
            let s = &self.sections[p.len() - 1];
            let (a, b) = s.relative_radii();
            return (s.kind, a, b);
        }
        let (lo, hi) = (&self.sections[idx - 1], &self.sections[idx]);
        let u = (t - p[idx - 1]) / (p[idx] - p[idx - 1]);
        let (ra, fa) = lo.relative_radii();
        let (rb, fb) = hi.relative_radii();
        (lo.kind, ra + u * (rb - ra), fa + u * (fb - fa))
    }

    fn build(&self, roof: BSplineCurve, floor: BSplineCurve, width: BSplineCurve) -> Result<Design> {
        let centre = centreline(&roof, &floor)?;
        let d_roof = roof.derivative().ok_or_else(|| Error::InvalidArgument("curves must be at least linear".into()))?;
        let d_floor = floor.derivative().ok_or_else(|| Error::InvalidArgument("curves must be at least linear".into()))?;
        let (lo, hi) = roof.domain();
        let n = self.stations;
        let params: Vec<f64> = (0..n).map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64).collect();

        let mut sections = Vec::with_capacity(n);
        let mut centre_points = Vec::with_capacity(n);
        let mut station = 0.0;
        for (j, &t) in params.iter().enumerate() {
            if j > 0 {
                station += arc_length(&centre, params[j - 1], t);
            }
            let r = roof.eval_unchecked(t);
            let f = floor.eval_unchecked(t);
            let dr = d_roof.eval_unchecked(t);
            let df = d_floor.eval_unchecked(t);
            let tangent = [(dr[0] + df[0]) / 2.0, (dr[1] + df[1]) / 2.0];
            let across = [r[0] - f[0], r[1] - f[1]];
            // roof must stay on the left of the flow direction
            let side = tangent[0] * across[1] - tangent[1] * across[0];
            if !(side > 0.0) {
                return Err(Error::RoofFloorCrossing { station: j, t });
            }
            let h = 0.5 * (across[0].hypot(across[1]));
            let w = width.eval_unchecked(t)[1];
            if !(w > 0.0) {
                return Err(Error::DegenerateGeometry(format!("non-positive width {w} at station {j}")));
            }
            let (kind, rel_roof, rel_floor) = self.section_template(t);
            let m = w.min(h);
            let section = CrossSection {
                w,
                h,
                roof_radius: rel_roof * m,
                floor_radius: rel_floor * m,
                station,
                angle: tangent[1].atan2(tangent[0]),
                kind,
            };
            section.validate()?;
            sections.push(section);
            centre_points.push([(r[0] + f[0]) / 2.0, (r[1] + f[1]) / 2.0]);
        }
        Ok(Design { roof, floor, width, centre, params, centre_points, sections })
    }

    /// Applies control-point offsets to the reference. Roof and floor points
    /// move vertically, width points laterally; the first two points of each
    /// curve stay put.
    pub fn synthesize(&self, x: &DesignVector) -> Result<Design> {
        let v = x.offsets();
        let mut roof = self.roof.control_points().to_vec();
        let mut floor = self.floor.control_points().to_vec();
        let mut width = self.width.control_points().to_vec();
        for (k, dz) in v[..ROOF_VARS].iter().enumerate() {
            roof[FIXED_POINTS + k][1] += dz;
        }
        for (k, dz) in v[ROOF_VARS..DIM_FIXED_WIDTH].iter().enumerate() {
            floor[FIXED_POINTS + k][1] += dz;
        }
        if v.len() == DIM_FREE_WIDTH {
            for (k, dw) in v[DIM_FIXED_WIDTH..].iter().enumerate() {
                width[FIXED_POINTS + k][1] += dw;
            }
        }
        self.build(
            self.roof.with_control_points(roof)?,
            self.floor.with_control_points(floor)?,
            self.width.with_control_points(width)?,
        )
    }
}

/// Control-point offsets `x = (R_1..R_7, F_1..F_7[, W_1..W_4])` in metres,
/// checked against their bounds on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignVector {
    offsets: Vec<f64>,
    bounds: Bounds,
}

impl DesignVector {
    pub fn new(offsets: Vec<f64>, bounds: Bounds) -> Result<Self> {
        if offsets.len() != DIM_FIXED_WIDTH && offsets.len() != DIM_FREE_WIDTH {
            return Err(Error::InvalidArgument(format!(
                "design vector must have {DIM_FIXED_WIDTH} or {DIM_FREE_WIDTH} components, got {}",
                offsets.len()
            )));
        }
        bounds.check(&offsets)?;
        Ok(Self { offsets, bounds })
    }

    /// All-zero offsets under `±0.25 m` bounds.
    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(vec![0.0; dim], Bounds::uniform(dim, -0.25, 0.25)?)
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }
}

/// A synthesized duct: its three curves plus sampled cross-sections.
#[derive(Debug, Clone)]
pub struct Design {
    pub roof: BSplineCurve,
    pub floor: BSplineCurve,
    pub width: BSplineCurve,
    centre: BSplineCurve,
    /// Curve parameter of each station.
    pub params: Vec<f64>,
    pub centre_points: Vec<Point2>,
    pub sections: Vec<CrossSection>,
}

/// Scalar geometric quantities of a design.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometrySummary {
    pub inlet_area: f64,
    pub outlet_area: f64,
    pub centreline_length: f64,
    /// Root-mean-square divergence half-angle of the equivalent-radius
    /// profile between consecutive stations, rad.
    pub mean_wall_slope: f64,
    pub mean_hydraulic_diameter: f64,
    pub inlet_diameter: f64,
    /// `D_in * integral of curvature^2 ds` along the centreline (dimensionless).
    pub curvature_energy: f64,
}

impl Design {
    pub fn centreline(&self) -> &BSplineCurve {
        &self.centre
    }

    pub fn summary(&self) -> Result<GeometrySummary> {
        let inlet = self
            .sections
            .iter()
            .find(|s| s.kind == SectionKind::Circular)
            .ok_or_else(|| Error::DegenerateGeometry("design has no circular inlet section".into()))?;
        let outlet = self
            .sections
            .iter()
            .rev()
            .find(|s| s.kind == SectionKind::RoundedRectangle)
            .ok_or_else(|| Error::DegenerateGeometry("design has no rounded-rectangle outlet section".into()))?;
        let inlet_area = inlet.area();
        let outlet_area = outlet.area();
        if !(inlet_area > 0.0 && outlet_area > 0.0) {
            return Err(Error::DegenerateGeometry("non-positive inlet or outlet area".into()));
        }
        let length = self.sections.last().map(|s| s.station).unwrap_or(0.0);
        if !(length > 0.0) {
            return Err(Error::DegenerateGeometry("zero-length centreline".into()));
        }

        let mut slope_sq = 0.0;
        for pair in self.sections.windows(2) {
            let ds = pair[1].station - pair[0].station;
            if !(ds > 0.0) {
                return Err(Error::DegenerateGeometry("coincident stations".into()));
            }
            let theta = ((pair[1].equivalent_radius() - pair[0].equivalent_radius()) / ds).atan();
            slope_sq += theta * theta;
        }
        let mean_wall_slope = (slope_sq / (self.sections.len() - 1) as f64).sqrt();
        let mean_hydraulic_diameter =
            self.sections.iter().map(CrossSection::hydraulic_diameter).sum::<f64>() / self.sections.len() as f64;
        let inlet_diameter = 2.0 * inlet.w;
        let curvature_energy = inlet_diameter * bending_energy(&self.centre);

        Ok(GeometrySummary {
            inlet_area,
            outlet_area,
            centreline_length: length,
            mean_wall_slope,
            mean_hydraulic_diameter,
            inlet_diameter,
            curvature_energy,
        })
    }
}

/// Mid-curve between roof and floor; valid because both share one knot vector.
fn centreline(roof: &BSplineCurve, floor: &BSplineCurve) -> Result<BSplineCurve> {
    let pts = roof
        .control_points()
        .iter()
        .zip(floor.control_points())
        .map(|(r, f)| [(r[0] + f[0]) / 2.0, (r[1] + f[1]) / 2.0])
        .collect();
    roof.with_control_points(pts)
}

const GAUSS5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664_0, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664_0, 0.236_926_885_056_189_1),
];

/// Gauss–Legendre integration of `f` over `[a, b]`, split at the curve's
/// breakpoints so the integrand is smooth on each piece.
fn integrate_spans(curve: &BSplineCurve, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let mut cuts = vec![a];
    cuts.extend(curve.breakpoints().into_iter().filter(|&k| k > a && k < b));
    cuts.push(b);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (mid, half) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
        total += half * GAUSS5.iter().map(|(x, wt)| wt * f(mid + half * x)).sum::<f64>();
    }
    total
}

fn arc_length(curve: &BSplineCurve, a: f64, b: f64) -> f64 {
    let d = curve.derivative().expect("order >= 2");
    integrate_spans(curve, a, b, |t| {
        let v = d.eval_unchecked(t);
        v[0].hypot(v[1])
    })
}

/// Integral of squared curvature with respect to arc length.
fn bending_energy(curve: &BSplineCurve) -> f64 {
    let Some(d1) = curve.derivative() else { return 0.0 };
    let Some(d2) = d1.derivative() else { return 0.0 };
    let (lo, hi) = curve.domain();
    integrate_spans(curve, lo, hi, |t| {
        let v = d1.eval_unchecked(t);
        let a = d2.eval_unchecked(t);
        let cross = v[0] * a[1] - v[1] * a[0];
        let speed = v[0].hypot(v[1]);
        if speed > 0.0 {
            cross * cross / speed.powi(5)
        } else {
            0.0
        }
    })
}

/// Cumulative arc length sampled on a uniform parameter grid, for station
/// to parameter lookup.
struct ArcTable {
    t: Vec<f64>,
    s: Vec<f64>,
}

impl ArcTable {
    fn new(curve: &BSplineCurve, n: usize) -> Self {
        let (lo, hi) = curve.domain();
        let t: Vec<f64> = (0..=n).map(|j| lo + (hi - lo) * j as f64 / n as f64).collect();
        let mut s = vec![0.0; t.len()];
        for j in 1..t.len() {
            s[j] = s[j - 1] + arc_length(curve, t[j - 1], t[j]);
        }
        Self { t, s }
    }

    fn total(&self) -> f64 {
        *self.s.last().unwrap()
    }

    fn t_min(&self) -> f64 {
        self.t[0]
    }

    fn t_max(&self) -> f64 {
        *self.t.last().unwrap()
    }

    fn param_at(&self, station: f64) -> f64 {
        let idx = self.s.partition_point(|&v| v < station).clamp(1, self.s.len() - 1);
        let (s0, s1) = (self.s[idx - 1], self.s[idx]);
        let u = if s1 > s0 { ((station - s0) / (s1 - s0)).clamp(0.0, 1.0) } else { 0.0 };
        self.t[idx - 1] + u * (self.t[idx] - self.t[idx - 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::builtin_reference;

    #[test]
    fn zero_offsets_reproduce_reference() {
        let reference = builtin_reference();
        for dim in [DIM_FIXED_WIDTH, DIM_FREE_WIDTH] {
            let design = reference.synthesize(&DesignVector::zeros(dim).unwrap()).unwrap();
            let base = reference.design().unwrap();
            assert_eq!(design.roof, *reference.roof());
            assert_eq!(design.floor, *reference.floor());
            assert_eq!(design.width, *reference.width());
            assert_eq!(design.sections, base.sections);
        }
    }

    #[test]
    fn fixed_width_scenario_leaves_width_curve() {
        let reference = builtin_reference();
        let x = DesignVector::new(vec![0.2; DIM_FIXED_WIDTH], Bounds::uniform(DIM_FIXED_WIDTH, -0.25, 0.25).unwrap()).unwrap();
        let design = reference.synthesize(&x).unwrap();
        assert_eq!(design.width, *reference.width());
        assert_ne!(design.roof, *reference.roof());
    }

    #[test]
    fn first_two_points_fixed() {
        let reference = builtin_reference();
        let x = DesignVector::new(vec![0.25; DIM_FREE_WIDTH], Bounds::uniform(DIM_FREE_WIDTH, -0.25, 0.25).unwrap()).unwrap();
        let d = reference.synthesize(&x).unwrap();
        for (a, b) in [(&d.roof, reference.roof()), (&d.floor, reference.floor()), (&d.width, reference.width())] {
            assert_eq!(a.control_points()[..2], b.control_points()[..2]);
            for (p, q) in a.control_points()[2..].iter().zip(&b.control_points()[2..]) {
                assert_eq!(p[0], q[0]);
                assert!((p[1] - q[1] - 0.25).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn upper_bound_envelope() {
        // x = ub raises each curve by 0.25 * (1 - N_0 - N_1)
        let reference = builtin_reference();
        let x = DesignVector::new(vec![0.25; DIM_FREE_WIDTH], Bounds::uniform(DIM_FREE_WIDTH, -0.25, 0.25).unwrap()).unwrap();
        let d = reference.synthesize(&x).unwrap();
        for j in 0..=50 {
            let t = j as f64 / 50.0;
            for (a, b) in [(&d.roof, reference.roof()), (&d.floor, reference.floor()), (&d.width, reference.width())] {
                let row = b.basis_row(t).unwrap();
                let lift = 0.25 * (1.0 - row[0] - row[1]);
                let pa = a.eval(t).unwrap();
                let pb = b.eval(t).unwrap();
                assert!((pa[1] - pb[1] - lift).abs() < 1e-12);
                assert!(pa[1] >= pb[1] - 1e-15);
            }
        }
    }

    #[test]
    fn crossing_is_rejected() {
        let reference = builtin_reference();
        let mut roof = reference.roof().control_points().to_vec();
        for p in roof.iter_mut().skip(4) {
            p[1] -= 4.0;
        }
        let roof = reference.roof().with_control_points(roof).unwrap();
        let err = reference.build(roof, reference.floor().clone(), reference.width().clone()).unwrap_err();
        assert!(matches!(err, Error::RoofFloorCrossing { .. }));
    }

    #[test]
    fn out_of_bounds_vector_rejected() {
        let b = Bounds::uniform(DIM_FIXED_WIDTH, -0.25, 0.25).unwrap();
        let mut v = vec![0.0; DIM_FIXED_WIDTH];
        v[3] = 0.3;
        assert!(matches!(DesignVector::new(v, b.clone()), Err(Error::BoundViolation { index: 3, .. })));
        assert!(DesignVector::new(vec![0.0; 15], Bounds::uniform(15, -0.25, 0.25).unwrap()).is_err());
    }

    #[test]
    fn summary_is_positive() {
        let s = builtin_reference().design().unwrap().summary().unwrap();
        assert!(s.inlet_area > 0.0 && s.outlet_area > s.inlet_area);
        assert!(s.centreline_length > 0.0 && s.mean_wall_slope > 0.0);
        assert!(s.curvature_energy > 0.0);
        assert!((s.inlet_area - std::f64::consts::PI * 1.1 * 1.1).abs() < 1e-12);
    }

    #[test]
    fn station_count() {
        let d = builtin_reference().design().unwrap();
        assert_eq!(d.sections.len(), DEFAULT_STATIONS);
        assert!(d.sections.windows(2).all(|w| w[1].station > w[0].station));
    }
}

#[cfg(test)]
mod generate {
    use std::path::Path;

    use super::*;

    /// Prints the reference section table for the shipped curves.
    /// `cargo test -p draftopt print_reference_sections -- --ignored --nocapture`
    #[test]
    #[ignore]
    fn print_reference_sections() {
        let c = crate::geometry::io::parse_curves(crate::geometry::BUILTIN_CURVES, Path::new("builtin")).unwrap();
        let centre = centreline(&c.roof, &c.floor).unwrap();
        let (dr, df) = (c.roof.derivative().unwrap(), c.floor.derivative().unwrap());
        let table: [(f64, SectionKind, f64, f64); 16] = [
            (0.0, SectionKind::Circular, 1.0, 1.0),
            (0.04, SectionKind::Circular, 1.0, 1.0),
            (0.08, SectionKind::Circular, 1.0, 1.0),
            (0.13, SectionKind::Ellipsoidal, 1.0, 1.0),
            (0.18, SectionKind::Ellipsoidal, 1.0, 1.0),
            (0.25, SectionKind::RoundedRectangle, 0.9, 0.9),
            (0.32, SectionKind::RoundedRectangle, 0.8, 0.75),
            (0.40, SectionKind::RoundedRectangle, 0.7, 0.6),
            (0.48, SectionKind::RoundedRectangle, 0.6, 0.5),
            (0.56, SectionKind::RoundedRectangle, 0.5, 0.42),
            (0.64, SectionKind::RoundedRectangle, 0.45, 0.36),
            (0.72, SectionKind::RoundedRectangle, 0.4, 0.32),
            (0.80, SectionKind::RoundedRectangle, 0.36, 0.29),
            (0.87, SectionKind::RoundedRectangle, 0.33, 0.27),
            (0.94, SectionKind::RoundedRectangle, 0.31, 0.26),
            (1.0, SectionKind::RoundedRectangle, 0.3, 0.25),
        ];
        println!("{}", crate::geometry::io::SECTIONS_HEADER);
        for (t, kind, rr, rf) in table {
            let r = c.roof.eval_unchecked(t);
            let f = c.floor.eval_unchecked(t);
            let h = 0.5 * (r[0] - f[0]).hypot(r[1] - f[1]);
            let w = c.width.eval_unchecked(t)[1];
            let (a, b) = (dr.eval_unchecked(t), df.eval_unchecked(t));
            let angle = (a[1] + b[1]).atan2(a[0] + b[0]);
            let station = arc_length(&centre, 0.0, t);
            let m = w.min(h);
            let r6 = |v: f64| (v * 1e6).round() / 1e6;
            println!("{},{},{},{},{},{},{}", r6(station), r6(w), r6(h), r6(rr * m), r6(rf * m), r6(angle), kind);
        }
    }
}
