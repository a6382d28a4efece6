//! Single-objective minimizers over box-bounded vectors.
//!
//! One iteration is one generation. Each generation's objective values are
//! computed in parallel, then the algorithm state advances sequentially, so
//! a seed gives the same trace regardless of thread count.

pub mod fwa;
pub mod lshade;
pub mod pso;

use std::sync::Arc;

use rayon::prelude::*;

use crate::bounds::Bounds;
use crate::error::{Error, Result};
use crate::table::Table;

pub use fwa::{run_fwa, FwaConfig};
pub use lshade::{population_schedule, run_lshade, LshadeConfig};
pub use pso::{run_pso, Inertia, PsoConfig};

pub type Objective = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct SoProblem {
    objective: Objective,
    bounds: Bounds,
    pub generations: usize,
    pub seed: u64,
}

impl std::fmt::Debug for SoProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SoProblem")
            .field("bounds", &self.bounds)
            .field("generations", &self.generations)
            .field("seed", &self.seed)
            .finish_non_exhaustive()
    }
}

impl SoProblem {
    pub const DEFAULT_GENERATIONS: usize = 500;

    pub fn new(objective: impl Fn(&[f64]) -> f64 + Send + Sync + 'static, bounds: Bounds, generations: usize, seed: u64) -> Result<Self> {
        if !bounds.is_open() {
            return Err(Error::InvalidArgument("optimization bounds need lb < ub in every dimension".into()));
        }
        if generations == 0 {
            return Err(Error::InvalidArgument("optimization needs at least one generation".into()));
        }
        Ok(Self { objective: Arc::new(objective), bounds, generations, seed })
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let f = (self.objective)(x);
        if f.is_nan() {
            f64::INFINITY
        } else {
            f
        }
    }

    /// Objective values in input order; NaN is treated as +inf.
    pub fn eval_all(&self, xs: &[Vec<f64>]) -> Vec<f64> {
        xs.par_iter().map(|x| self.eval(x)).collect()
    }
}

/// Turns a maximization target into a minimization objective.
pub fn negate_for_max<F: Fn(&[f64]) -> f64>(f: F) -> impl Fn(&[f64]) -> f64 {
    move |x| -f(x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub iteration: usize,
    pub evaluations: usize,
    pub best_f: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SoResult {
    pub best_x: Vec<f64>,
    pub best_f: f64,
    /// Best-so-far after initialization (iteration 0) and after every generation.
    pub trace: Vec<TracePoint>,
    pub evaluations: usize,
    pub final_population: usize,
}

impl SoResult {
    pub fn trace_table(&self) -> Table {
        let mut t = Table::new(vec!["iteration".into(), "evaluations".into(), "best_f".into()]);
        t.rows = self.trace.iter().map(|p| vec![p.iteration as f64, p.evaluations as f64, p.best_f]).collect();
        t
    }
}

/// Running best and trace bookkeeping shared by the algorithms.
#[derive(Debug)]
pub(crate) struct Recorder {
    best_x: Vec<f64>,
    best_f: f64,
    evaluations: usize,
    trace: Vec<TracePoint>,
}

impl Recorder {
    pub(crate) fn new(dim: usize) -> Self {
        Self { best_x: vec![0.0; dim], best_f: f64::INFINITY, evaluations: 0, trace: Vec::new() }
    }

    pub(crate) fn observe(&mut self, xs: &[Vec<f64>], fs: &[f64]) {
        let first = self.evaluations == 0;
        self.evaluations += xs.len();
        for (k, (x, &f)) in xs.iter().zip(fs).enumerate() {
            if f < self.best_f || (first && k == 0) {
                self.best_f = f;
                self.best_x.clone_from(x);
            }
        }
    }

    pub(crate) fn end_iteration(&mut self, iteration: usize) {
        self.trace.push(TracePoint { iteration, evaluations: self.evaluations, best_f: self.best_f });
    }

    pub(crate) fn finish(self, final_population: usize) -> SoResult {
        SoResult { best_x: self.best_x, best_f: self.best_f, trace: self.trace, evaluations: self.evaluations, final_population }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negation() {
        let f = |x: &[f64]| x[0] * 2.0;
        let g = negate_for_max(f);
        assert_eq!(g(&[3.0]), -6.0);
        let h = negate_for_max(g);
        assert_eq!(h(&[3.0]), 6.0);
    }

    #[test]
    fn nan_counts_as_worst() {
        let p = SoProblem::new(|_| f64::NAN, Bounds::uniform(2, 0.0, 1.0).unwrap(), 1, 0).unwrap();
        assert_eq!(p.eval(&[0.5, 0.5]), f64::INFINITY);
    }
}
