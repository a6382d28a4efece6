//! Local outlier factor with tie-inclusive k-neighbourhoods.
//!
//! The k-distance of a point is the distance to its k-th nearest other
//! point; its neighbourhood is every other point no farther than that, so
//! ties can make it larger than k. Sums over a neighbourhood run in
//! ascending row order.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Floor on the mean reachability distance, so duplicated points get a
/// large but finite density.
pub const MIN_REACH: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct LofOutcome {
    pub scores: Vec<f64>,
    pub keep: Vec<bool>,
}

impl LofOutcome {
    pub fn dropped(&self) -> usize {
        self.keep.iter().filter(|k| !**k).count()
    }

    pub fn dropped_fraction(&self) -> f64 {
        if self.keep.is_empty() {
            0.0
        } else {
            self.dropped() as f64 / self.keep.len() as f64
        }
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

struct Neighbourhood {
    k_distance: f64,
    /// (row, distance), ascending row.
    members: Vec<(usize, f64)>,
}

fn neighbourhood(points: &[Vec<f64>], i: usize, k: usize) -> Neighbourhood {
    let d: Vec<(usize, f64)> =
        (0..points.len()).filter(|&j| j != i).map(|j| (j, distance(&points[i], &points[j]))).collect();
    let mut sorted: Vec<f64> = d.iter().map(|p| p.1).collect();
    let (_, kth, _) = sorted.select_nth_unstable_by(k - 1, f64::total_cmp);
    let k_distance = *kth;
    let members = d.into_iter().filter(|&(_, dist)| dist <= k_distance).collect();
    Neighbourhood { k_distance, members }
}

pub fn lof_scores(points: &[Vec<f64>], k: usize) -> Result<Vec<f64>> {
    let n = points.len();
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!("LOF needs 1 <= k < n (k = {k}, n = {n})")));
    }
    let m = points[0].len();
    if points.iter().any(|p| p.len() != m || p.iter().any(|v| !v.is_finite())) {
        return Err(Error::InvalidArgument("LOF points must be finite rows of equal length".into()));
    }
    let hoods: Vec<Neighbourhood> = (0..n).into_par_iter().map(|i| neighbourhood(points, i, k)).collect();
    let lrd: Vec<f64> = hoods
        .iter()
        .map(|h| {
            let reach: f64 = h.members.iter().map(|&(j, d)| d.max(hoods[j].k_distance)).sum();
            1.0 / (reach / h.members.len() as f64).max(MIN_REACH)
        })
        .collect();
    Ok(hoods
        .iter()
        .enumerate()
        .map(|(i, h)| h.members.iter().map(|&(j, _)| lrd[j]).sum::<f64>() / h.members.len() as f64 / lrd[i])
        .collect())
}

/// Flags rows whose LOF exceeds `threshold`.
pub fn lof_filter(points: &[Vec<f64>], k: usize, threshold: f64) -> Result<LofOutcome> {
    let scores = lof_scores(points, k)?;
    let keep = scores.iter().map(|&s| s <= threshold).collect();
    Ok(LofOutcome { scores, keep })
}

/// Per-column zero mean, unit (population) standard deviation. Constant
/// columns become zero.
pub fn standardize(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = rows.len();
    if n == 0 {
        return Vec::new();
    }
    let m = rows[0].len();
    let mut out = rows.to_vec();
    for j in 0..m {
        let mean = rows.iter().map(|r| r[j]).sum::<f64>() / n as f64;
        let var = rows.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / n as f64;
        let sd = var.sqrt();
        for r in &mut out {
            r[j] = if sd > 0.0 { (r[j] - mean) / sd } else { 0.0 };
        }
    }
    out
}
