//! Multi-objective minimizers of two objectives over box-bounded vectors,
//! with Pareto utilities and indicators.

pub mod indicators;
pub mod moead;
pub mod nsga2;
pub mod operators;
pub mod pareto;
pub mod spea2;

use std::sync::Arc;

use rand::Rng as _;
use rayon::prelude::*;

use crate::bounds::Bounds;
use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::table::Table;

pub use indicators::{additive_epsilon, hypervolume2d, mutual_epsilon};
pub use moead::{run_moead, weight_vectors, MoeadConfig};
pub use nsga2::{run_nsga2, NsgaConfig};
pub use pareto::{crowding_distance, dominates, nondominated_sort};
pub use spea2::{run_spea2, spea2_fitness, SpeaConfig};

pub type Objectives = Arc<dyn Fn(&[f64]) -> [f64; 2] + Send + Sync>;

#[derive(Clone)]
pub struct MoProblem {
    objectives: Objectives,
    bounds: Bounds,
    pub generations: usize,
    pub seed: u64,
}

impl std::fmt::Debug for MoProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MoProblem")
            .field("bounds", &self.bounds)
            .field("generations", &self.generations)
            .field("seed", &self.seed)
            .finish_non_exhaustive()
    }
}

impl MoProblem {
    pub fn new(objectives: impl Fn(&[f64]) -> [f64; 2] + Send + Sync + 'static, bounds: Bounds, generations: usize, seed: u64) -> Result<Self> {
        if !bounds.is_open() {
            return Err(Error::InvalidArgument("optimization bounds need lb < ub in every dimension".into()));
        }
        Ok(Self { objectives: Arc::new(objectives), bounds, generations, seed })
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    /// NaN objectives become +inf.
    pub fn eval(&self, x: &[f64]) -> [f64; 2] {
        let f = (self.objectives)(x);
        f.map(|v| if v.is_nan() { f64::INFINITY } else { v })
    }

    pub fn eval_all(&self, xs: &[Vec<f64>]) -> Vec<[f64; 2]> {
        xs.par_iter().map(|x| self.eval(x)).collect()
    }

    pub(crate) fn random_population(&self, n: usize, rng: &mut Rng) -> Vec<Vec<f64>> {
        let b = &self.bounds;
        (0..n).map(|_| (0..b.dim()).map(|j| rng.random_range(b.lower()[j]..=b.upper()[j])).collect()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveMember {
    pub x: Vec<f64>,
    pub f: [f64; 2],
}

/// Mutually non-dominated solutions, sorted by the first objective. Members
/// with identical objective vectors are kept once.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParetoArchive {
    members: Vec<ArchiveMember>,
}

impl ParetoArchive {
    /// Non-dominated subset of a population.
    pub fn from_population(xs: &[Vec<f64>], fs: &[[f64; 2]]) -> Self {
        let fronts = nondominated_sort(fs);
        let mut members: Vec<ArchiveMember> = fronts
            .first()
            .map(|f0| f0.iter().map(|&i| ArchiveMember { x: xs[i].clone(), f: fs[i] }).collect())
            .unwrap_or_default();
        members.sort_by(|a, b| a.f[0].total_cmp(&b.f[0]).then(a.f[1].total_cmp(&b.f[1])));
        members.dedup_by(|a, b| a.f == b.f);
        Self { members }
    }

    /// Non-dominated union with another archive.
    pub fn merge(&mut self, other: &ParetoArchive) {
        let (xs, fs): (Vec<Vec<f64>>, Vec<[f64; 2]>) =
            self.members.iter().chain(&other.members).map(|m| (m.x.clone(), m.f)).unzip();
        *self = Self::from_population(&xs, &fs);
    }

    pub fn members(&self) -> &[ArchiveMember] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn points(&self) -> Vec<[f64; 2]> {
        self.members.iter().map(|m| m.f).collect()
    }

    /// No member dominates another.
    pub fn is_valid(&self) -> bool {
        self.members
            .iter()
            .enumerate()
            .all(|(i, a)| self.members.iter().enumerate().all(|(j, b)| i == j || !dominates(&a.f, &b.f)))
    }

    /// Columns `x1..xm,f1,f2` plus any `extra` columns computed per member.
    pub fn to_table(&self, extra: &[(&str, &dyn Fn(&ArchiveMember) -> f64)]) -> Table {
        let m = self.members.first().map_or(0, |a| a.x.len());
        let mut header = crate::table::feature_header(m);
        header.push("f1".into());
        header.push("f2".into());
        header.extend(extra.iter().map(|(n, _)| n.to_string()));
        let mut t = Table::new(header);
        t.rows = self
            .members
            .iter()
            .map(|a| {
                let mut r = a.x.clone();
                r.extend_from_slice(&a.f);
                r.extend(extra.iter().map(|(_, f)| f(a)));
                r
            })
            .collect();
        t
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoResult {
    pub archive: ParetoArchive,
    pub evaluations: usize,
}

/// Called after initialization (generation 0) and after every generation
/// with the algorithm's current elite set.
pub type Observer<'a> = &'a mut dyn FnMut(usize, &ParetoArchive);

/// Binary tournament: index of the better of two random picks under `better`.
pub(crate) fn tournament(n: usize, rng: &mut Rng, better: impl Fn(usize, usize) -> bool) -> usize {
    let a = rng.random_range(0..n);
    let b = rng.random_range(0..n);
    if better(b, a) {
        b
    } else {
        a
    }
}
