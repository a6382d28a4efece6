//! Latin hypercube sampling.
//!
//! Each dimension is cut into `n` equal-width strata; every stratum receives
//! exactly one sample, placed uniformly inside it, and strata are assigned to
//! rows by an independent random permutation per dimension.

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::bounds::Bounds;
use crate::error::{Error, Result};
use crate::rng;
use crate::table::{feature_header, Table};

#[derive(Debug, Clone)]
pub struct DoePlan {
    pub n_samples: usize,
    pub bounds: Bounds,
    pub seed: u64,
}

impl DoePlan {
    pub fn new(n_samples: usize, bounds: Bounds, seed: u64) -> Result<Self> {
        if n_samples == 0 {
            return Err(Error::InvalidArgument("LHS needs at least one sample".into()));
        }
        if !bounds.is_open() {
            return Err(Error::InvalidArgument("LHS bounds need lb < ub in every dimension".into()));
        }
        Ok(Self { n_samples, bounds, seed })
    }

    pub fn dims(&self) -> usize {
        self.bounds.dim()
    }
}

/// Index of the stratum of `[lo, hi)` containing `v` when split into `n` bins.
pub fn stratum(v: f64, lo: f64, hi: f64, n: usize) -> usize {
    let b = ((v - lo) / (hi - lo) * n as f64).floor();
    (b.max(0.0) as usize).min(n - 1)
}

/// `n x m` sample matrix, row-major.
pub fn lhs(plan: &DoePlan) -> Result<Vec<Vec<f64>>> {
    if plan.n_samples == 0 || !plan.bounds.is_open() {
        return Err(Error::InvalidArgument("invalid LHS plan".into()));
    }
    let n = plan.n_samples;
    let mut rng = rng::seeded(plan.seed);
    let mut out = vec![vec![0.0; plan.dims()]; n];
    let mut perm: Vec<usize> = (0..n).collect();
    for j in 0..plan.dims() {
        let (lo, hi) = (plan.bounds.lower()[j], plan.bounds.upper()[j]);
        perm.shuffle(&mut rng);
        for (row, &bin) in out.iter_mut().zip(&perm) {
            let u: f64 = rng.random();
            let mut v = lo + (bin as f64 + u) / n as f64 * (hi - lo);
            // float rounding can push a value across a stratum edge
            while v >= hi || stratum(v, lo, hi, n) > bin {
                v = v.next_down();
            }
            while stratum(v, lo, hi, n) < bin {
                v = v.next_up();
            }
            row[j] = v;
        }
    }
    Ok(out)
}

pub fn samples_table(samples: &[Vec<f64>]) -> Table {
    let m = samples.first().map_or(0, Vec::len);
    let mut t = Table::new(feature_header(m));
    t.rows = samples.to_vec();
    t
}
