//! NSGA-II: rank and crowding tournament, SBX and polynomial mutation,
//! elitist (mu + lambda) survival.

use crate::error::{Error, Result};
use crate::rng;

use super::operators::{polynomial_mutation, sbx};
use super::pareto::{crowding_distance, nondominated_sort, ranks};
use super::{tournament, MoProblem, MoResult, Observer, ParetoArchive};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NsgaConfig {
    pub population: usize,
    pub crossover_prob: f64,
    /// Per-variable mutation probability.
    pub mutation_prob: f64,
    pub eta_crossover: f64,
    pub eta_mutation: f64,
}

impl Default for NsgaConfig {
    fn default() -> Self {
        Self { population: 200, crossover_prob: 0.9, mutation_prob: 0.1, eta_crossover: 20.0, eta_mutation: 20.0 }
    }
}

impl NsgaConfig {
    pub(crate) fn validate(&self) -> Result<()> {
        if self.population < 2 || self.population % 2 != 0 {
            return Err(Error::InvalidArgument("population must be even and at least 2".into()));
        }
        if !(0.0..=1.0).contains(&self.crossover_prob) || !(0.0..=1.0).contains(&self.mutation_prob) {
            return Err(Error::InvalidArgument("probabilities must lie in [0, 1]".into()));
        }
        if self.eta_crossover < 0.0 || self.eta_mutation < 0.0 {
            return Err(Error::InvalidArgument("distribution indices must be non-negative".into()));
        }
        Ok(())
    }
}

/// Ranks and crowding distances for a whole population.
fn rank_and_crowd(fs: &[[f64; 2]]) -> (Vec<usize>, Vec<f64>, Vec<Vec<usize>>) {
    let fronts = nondominated_sort(fs);
    let rank = ranks(&fronts, fs.len());
    let mut crowd = vec![0.0; fs.len()];
    for front in &fronts {
        let pts: Vec<[f64; 2]> = front.iter().map(|&i| fs[i]).collect();
        for (k, d) in crowding_distance(&pts).into_iter().enumerate() {
            crowd[front[k]] = d;
        }
    }
    (rank, crowd, fronts)
}

pub fn run_nsga2(problem: &MoProblem, cfg: &NsgaConfig) -> Result<MoResult> {
    run_nsga2_observed(problem, cfg, &mut |_, _| {})
}

pub fn run_nsga2_observed(problem: &MoProblem, cfg: &NsgaConfig, observer: Observer) -> Result<MoResult> {
    cfg.validate()?;
    let n = cfg.population;
    let b = problem.bounds();
    let mut rng = rng::seeded(problem.seed);
    let mut xs = problem.random_population(n, &mut rng);
    let mut fs = problem.eval_all(&xs);
    let mut evaluations = n;
    observer(0, &ParetoArchive::from_population(&xs, &fs));
    let (mut rank, mut crowd, _) = rank_and_crowd(&fs);

    for gen in 1..=problem.generations {
        let better = |a: usize, c: usize| rank[a] < rank[c] || (rank[a] == rank[c] && crowd[a] > crowd[c]);
        let mut children = Vec::with_capacity(n);
        while children.len() < n {
            let p1 = tournament(n, &mut rng, better);
            let p2 = tournament(n, &mut rng, better);
            let (mut c1, mut c2) = sbx(&xs[p1], &xs[p2], cfg.eta_crossover, cfg.crossover_prob, b, &mut rng);
            polynomial_mutation(&mut c1, cfg.eta_mutation, cfg.mutation_prob, b, &mut rng);
            polynomial_mutation(&mut c2, cfg.eta_mutation, cfg.mutation_prob, b, &mut rng);
            children.push(c1);
            children.push(c2);
        }
        let cf = problem.eval_all(&children);
        evaluations += children.len();
        xs.extend(children);
        fs.extend(cf);

        let (_, all_crowd, fronts) = rank_and_crowd(&fs);
        let mut keep = Vec::with_capacity(n);
        for front in &fronts {
            if keep.len() + front.len() <= n {
                keep.extend_from_slice(front);
            } else {
                let mut last = front.clone();
                last.sort_by(|&a, &c| all_crowd[c].total_cmp(&all_crowd[a]).then(a.cmp(&c)));
                keep.extend_from_slice(&last[..n - keep.len()]);
            }
            if keep.len() == n {
                break;
            }
        }
        let mut pool: Vec<Option<Vec<f64>>> = xs.into_iter().map(Some).collect();
        xs = keep.iter().map(|&i| pool[i].take().expect("kept once")).collect();
        fs = keep.iter().map(|&i| fs[i]).collect();
        (rank, crowd, _) = rank_and_crowd(&fs);
        observer(gen, &ParetoArchive::from_population(&xs, &fs));
    }
    Ok(MoResult { archive: ParetoArchive::from_population(&xs, &fs), evaluations })
}
