//! MOEA/D with Tchebycheff decomposition, differential-evolution variation
//! and a bounded number of neighbour replacements per offspring.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng;

use super::operators::polynomial_mutation;
use super::{MoProblem, MoResult, Observer, ParetoArchive};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoeadConfig {
    pub population: usize,
    pub neighbours: usize,
    /// Probability of mating inside the neighbourhood.
    pub delta: f64,
    /// Maximum solutions replaced by one offspring.
    pub max_replace: usize,
    pub differential_weight: f64,
    /// Binomial crossover rate of the differential step; one component
    /// always takes the donor value.
    pub crossover_rate: f64,
    pub mutation_prob: f64,
    pub eta_mutation: f64,
}

impl Default for MoeadConfig {
    fn default() -> Self {
        Self {
            population: 200,
            neighbours: 20,
            delta: 0.9,
            max_replace: 2,
            differential_weight: 0.5,
            crossover_rate: 1.0,
            mutation_prob: 0.1,
            eta_mutation: 20.0,
        }
    }
}

impl MoeadConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population < 3 {
            return Err(Error::InvalidArgument("MOEA/D needs at least 3 subproblems".into()));
        }
        if self.neighbours < 3 || self.neighbours > self.population {
            return Err(Error::InvalidArgument("neighbourhood size must lie in [3, population]".into()));
        }
        if !(0.0..=1.0).contains(&self.delta) || !(0.0..=1.0).contains(&self.crossover_rate) || !(0.0..=1.0).contains(&self.mutation_prob) || self.max_replace == 0 {
            return Err(Error::InvalidArgument("invalid MOEA/D parameters".into()));
        }
        Ok(())
    }
}

/// Evenly spread weights `(i/(n-1), 1 - i/(n-1))`.
pub fn weight_vectors(n: usize) -> Vec<[f64; 2]> {
    if n == 1 {
        return vec![[0.5, 0.5]];
    }
    (0..n)
        .map(|i| {
            let a = i as f64 / (n - 1) as f64;
            [a, 1.0 - a]
        })
        .collect()
}

/// The `t` closest weight vectors to each weight (itself included), ties by index.
pub fn neighbourhoods(weights: &[[f64; 2]], t: usize) -> Vec<Vec<usize>> {
    weights
        .iter()
        .map(|w| {
            let mut idx: Vec<usize> = (0..weights.len()).collect();
            let d = |j: usize| (w[0] - weights[j][0]).hypot(w[1] - weights[j][1]);
            idx.sort_by(|&a, &b| d(a).total_cmp(&d(b)).then(a.cmp(&b)));
            idx.truncate(t);
            idx
        })
        .collect()
}

pub fn tchebycheff(f: &[f64; 2], weight: &[f64; 2], ideal: &[f64; 2]) -> f64 {
    (weight[0] * (f[0] - ideal[0]).abs()).max(weight[1] * (f[1] - ideal[1]).abs())
}

pub fn run_moead(problem: &MoProblem, cfg: &MoeadConfig) -> Result<MoResult> {
    run_moead_observed(problem, cfg, &mut |_, _| {})
}

pub fn run_moead_observed(problem: &MoProblem, cfg: &MoeadConfig, observer: Observer) -> Result<MoResult> {
    cfg.validate()?;
    let n = cfg.population;
    let b = problem.bounds();
    let weights = weight_vectors(n);
    let hood = neighbourhoods(&weights, cfg.neighbours);
    let everyone: Vec<usize> = (0..n).collect();
    let mut rng = rng::seeded(problem.seed);
    let mut xs = problem.random_population(n, &mut rng);
    let mut fs = problem.eval_all(&xs);
    let mut evaluations = n;
    let mut ideal = [f64::INFINITY; 2];
    for f in &fs {
        ideal = [ideal[0].min(f[0]), ideal[1].min(f[1])];
    }
    observer(0, &ParetoArchive::from_population(&xs, &fs));

    for gen in 1..=problem.generations {
        let mut scopes = Vec::with_capacity(n);
        let mut children = Vec::with_capacity(n);
        for i in 0..n {
            let scope: &[usize] = if rng.random::<f64>() < cfg.delta { &hood[i] } else { &everyone };
            let picks: Vec<usize> = scope.choose_multiple(&mut rng, 2).copied().collect();
            let forced = rng.random_range(0..b.dim());
            let mut y: Vec<f64> = (0..b.dim())
                .map(|j| {
                    if j == forced || rng.random::<f64>() < cfg.crossover_rate {
                        xs[i][j] + cfg.differential_weight * (xs[picks[0]][j] - xs[picks[1]][j])
                    } else {
                        xs[i][j]
                    }
                })
                .collect();
            b.clamp(&mut y);
            polynomial_mutation(&mut y, cfg.eta_mutation, cfg.mutation_prob, b, &mut rng);
            scopes.push(scope);
            children.push(y);
        }
        let cf = problem.eval_all(&children);
        evaluations += n;
        for (i, (y, fy)) in children.into_iter().zip(cf).enumerate() {
            ideal = [ideal[0].min(fy[0]), ideal[1].min(fy[1])];
            let mut order = scopes[i].to_vec();
            order.shuffle(&mut rng);
            let mut replaced = 0;
            for j in order {
                if replaced == cfg.max_replace {
                    break;
                }
                if tchebycheff(&fy, &weights[j], &ideal) < tchebycheff(&fs[j], &weights[j], &ideal) {
                    xs[j] = y.clone();
                    fs[j] = fy;
                    replaced += 1;
                }
            }
        }
        observer(gen, &ParetoArchive::from_population(&xs, &fs));
    }
    Ok(MoResult { archive: ParetoArchive::from_population(&xs, &fs), evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_span_simplex() {
        let w = weight_vectors(5);
        assert_eq!(w[0], [0.0, 1.0]);
        assert_eq!(w[4], [1.0, 0.0]);
        assert!(w.iter().all(|v| (v[0] + v[1] - 1.0).abs() < 1e-15));
    }

    #[test]
    fn neighbourhoods_include_self() {
        let h = neighbourhoods(&weight_vectors(10), 3);
        assert_eq!(h[0], vec![0, 1, 2]);
        let mut mid = h[5].clone();
        mid.sort();
        assert_eq!(mid, vec![4, 5, 6]);
        assert_eq!(h[5][0], 5);
    }

    #[test]
    fn zero_weight_ignores_objective() {
        assert_eq!(tchebycheff(&[100.0, 1.0], &[0.0, 1.0], &[0.0, 0.0]), 1.0);
    }
}
