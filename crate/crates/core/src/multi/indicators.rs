//! Quality indicators for two-objective fronts (minimization).

use crate::error::{Error, Result};

/// Exact dominated area between `front` and `reference`.
pub fn hypervolume2d(front: &[[f64; 2]], reference: [f64; 2]) -> Result<f64> {
    if let Some(p) = front.iter().find(|p| !(p[0] <= reference[0] && p[1] <= reference[1])) {
        return Err(Error::InvalidArgument(format!("point {p:?} lies beyond the reference point {reference:?}")));
    }
    let mut pts = front.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut area = 0.0;
    let mut level = reference[1];
    for p in pts {
        if p[1] < level {
            area += (reference[0] - p[0]) * (level - p[1]);
            level = p[1];
        }
    }
    Ok(area)
}

/// Smallest `e` such that every point of `b` is weakly dominated by some
/// point of `a` shifted by `-e`.
pub fn additive_epsilon(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    b.iter()
        .map(|q| a.iter().map(|p| (p[0] - q[0]).max(p[1] - q[1])).fold(f64::INFINITY, f64::min))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `max(I(a, b), I(b, a))`.
pub fn mutual_epsilon(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    additive_epsilon(a, b).max(additive_epsilon(b, a))
}

/// Rescales each objective to `[0, 1]` over the extremes of `fronts` taken
/// together. Returns the scaled fronts in the same order.
pub fn normalize(fronts: &[Vec<[f64; 2]>]) -> Vec<Vec<[f64; 2]>> {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in fronts.iter().flatten() {
        for m in 0..2 {
            lo[m] = lo[m].min(p[m]);
            hi[m] = hi[m].max(p[m]);
        }
    }
    let scale = |v: f64, m: usize| if hi[m] > lo[m] { (v - lo[m]) / (hi[m] - lo[m]) } else { 0.0 };
    fronts.iter().map(|f| f.iter().map(|p| [scale(p[0], 0), scale(p[1], 1)]).collect()).collect()
}
