//! Plain-text reference geometry files.
//!
//! Sections file (CSV, SI units, `.` decimal separator):
//!
//! ```text
//! station,w,h,r_r,r_f,angle,kind
//! 0,1.1,1.1,1.1,1.1,-1.5707963267948966,circular
//! ```
//!
//! Curves file: `#` starts a comment; each curve is a `curve <name> <order> <n>`
//! line, a `knots ...` line, then `n` lines of `x y` control points. Names are
//! `roof`, `floor` and `width`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

use super::bspline::{BSplineCurve, Point2};
use super::design::{ReferenceGeometry, ReferenceSection};

pub const SECTIONS_HEADER: &str = "station,w,h,r_r,r_f,angle,kind";

pub fn parse_sections(text: &str, origin: &Path) -> Result<Vec<ReferenceSection>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(origin, 1, "empty sections file"))?;
    if header.trim() != SECTIONS_HEADER {
        return Err(Error::parse(origin, hline + 1, format!("expected header '{SECTIONS_HEADER}'")));
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 7 {
            return Err(Error::parse(origin, i + 1, format!("expected 7 fields, got {}", fields.len())));
        }
        let mut nums = [0.0; 6];
        for (k, f) in fields[..6].iter().enumerate() {
            nums[k] = f
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::parse(origin, i + 1, format!("invalid number '{f}'")))?;
        }
        let kind = fields[6].parse().map_err(|e: Error| Error::parse(origin, i + 1, e.to_string()))?;
        out.push(ReferenceSection {
            station: nums[0],
            w: nums[1],
            h: nums[2],
            roof_radius: nums[3],
            floor_radius: nums[4],
            angle: nums[5],
            kind,
        });
    }
    Ok(out)
}

pub fn format_sections(sections: &[ReferenceSection]) -> String {
    let mut s = String::from(SECTIONS_HEADER);
    s.push('\n');
    for r in sections {
        let _ = writeln!(s, "{},{},{},{},{},{},{}", r.station, r.w, r.h, r.roof_radius, r.floor_radius, r.angle, r.kind);
    }
    s
}

pub struct CurveSet {
    pub roof: BSplineCurve,
    pub floor: BSplineCurve,
    pub width: BSplineCurve,
}

pub fn parse_curves(text: &str, origin: &Path) -> Result<CurveSet> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (mut roof, mut floor, mut width) = (None, None, None);
    while let Some((ln, line)) = lines.next() {
        let head: Vec<&str> = line.split_whitespace().collect();
        if head.len() != 4 || head[0] != "curve" {
            return Err(Error::parse(origin, ln, "expected 'curve <name> <order> <n>'"));
        }
        let order: usize = head[2].parse().map_err(|_| Error::parse(origin, ln, "invalid order"))?;
        let n: usize = head[3].parse().map_err(|_| Error::parse(origin, ln, "invalid point count"))?;
        let (kln, kline) = lines.next().ok_or_else(|| Error::parse(origin, ln, "missing knots line"))?;
        let mut kparts = kline.split_whitespace();
        if kparts.next() != Some("knots") {
            return Err(Error::parse(origin, kln, "expected 'knots ...'"));
        }
        let knots = kparts
            .map(|v| v.parse::<f64>().map_err(|_| Error::parse(origin, kln, format!("invalid knot '{v}'"))))
            .collect::<Result<Vec<_>>>()?;
        let mut pts: Vec<Point2> = Vec::with_capacity(n);
        for _ in 0..n {
            let (pln, pline) = lines.next().ok_or_else(|| Error::parse(origin, ln, "missing control points"))?;
            let v: Vec<f64> = pline
                .split_whitespace()
                .map(|s| s.parse::<f64>().map_err(|_| Error::parse(origin, pln, format!("invalid coordinate '{s}'"))))
                .collect::<Result<_>>()?;
            if v.len() != 2 {
                return Err(Error::parse(origin, pln, "control point needs two coordinates"));
            }
            pts.push([v[0], v[1]]);
        }
        let curve = BSplineCurve::new(order, pts, knots).map_err(|e| Error::parse(origin, ln, e.to_string()))?;
        let slot = match head[1] {
            "roof" => &mut roof,
            "floor" => &mut floor,
            "width" => &mut width,
            other => return Err(Error::parse(origin, ln, format!("unknown curve '{other}'"))),
        };
        if slot.replace(curve).is_some() {
            return Err(Error::parse(origin, ln, format!("duplicate curve '{}'", head[1])));
        }
    }
    let missing = |name: &str| Error::parse(origin, 0, format!("missing curve '{name}'"));
    Ok(CurveSet {
        roof: roof.ok_or_else(|| missing("roof"))?,
        floor: floor.ok_or_else(|| missing("floor"))?,
        width: width.ok_or_else(|| missing("width"))?,
    })
}

pub fn format_curves(curves: &[(&str, &BSplineCurve)]) -> String {
    let mut s = String::from("# draftopt reference curves, format 1\n");
    for (name, c) in curves {
        let _ = writeln!(s, "curve {name} {} {}", c.order(), c.control_points().len());
        let knots: Vec<String> = c.knots().iter().map(|k| k.to_string()).collect();
        let _ = writeln!(s, "knots {}", knots.join(" "));
        for p in c.control_points() {
            let _ = writeln!(s, "{} {}", p[0], p[1]);
        }
    }
    s
}

pub fn load_reference(sections: &Path, curves: &Path, stations: usize) -> Result<ReferenceGeometry> {
    let stext = std::fs::read_to_string(sections).map_err(|e| Error::io(sections, e))?;
    let ctext = std::fs::read_to_string(curves).map_err(|e| Error::io(curves, e))?;
    let c = parse_curves(&ctext, curves)?;
    ReferenceGeometry::new(c.roof, c.floor, c.width, parse_sections(&stext, sections)?, stations)
}

pub fn save_reference(reference: &ReferenceGeometry, sections: &Path, curves: &Path) -> Result<()> {
    std::fs::write(sections, format_sections(reference.sections())).map_err(|e| Error::io(sections, e))?;
    let text = format_curves(&[("roof", reference.roof()), ("floor", reference.floor()), ("width", reference.width())]);
    std::fs::write(curves, text).map_err(|e| Error::io(curves, e))
}
