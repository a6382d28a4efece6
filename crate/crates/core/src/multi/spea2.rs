//! SPEA2: strength-based fitness with k-th nearest neighbour density, a fixed
//! size archive and distance-based truncation.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::rng;

use super::operators::{polynomial_mutation, sbx};
use super::pareto::dominates;
use super::{tournament, MoProblem, MoResult, Observer, ParetoArchive};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeaConfig {
    pub population: usize,
    pub archive: usize,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    pub eta_crossover: f64,
    pub eta_mutation: f64,
}

impl Default for SpeaConfig {
    fn default() -> Self {
        Self { population: 200, archive: 200, crossover_prob: 0.9, mutation_prob: 0.1, eta_crossover: 20.0, eta_mutation: 20.0 }
    }
}

impl SpeaConfig {
    fn validate(&self) -> Result<()> {
        if self.population < 2 || self.population % 2 != 0 || self.archive < 1 {
            return Err(Error::InvalidArgument("population must be even and at least 2, archive at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.crossover_prob) || !(0.0..=1.0).contains(&self.mutation_prob) {
            return Err(Error::InvalidArgument("probabilities must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

fn dist(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Raw fitness (sum of the strengths of all dominators) plus density
/// `1 / (d_k + 2)`, with `d_k` the distance to the `floor(sqrt(n))`-th
/// nearest other point. Values below 1 mark non-dominated points.
pub fn spea2_fitness(points: &[[f64; 2]]) -> Vec<f64> {
    let n = points.len();
    let strength: Vec<usize> =
        (0..n).map(|i| (0..n).filter(|&j| dominates(&points[i], &points[j])).count()).collect();
    let k = ((n as f64).sqrt().floor() as usize).max(1);
    (0..n)
        .map(|i| {
            let raw: usize = (0..n).filter(|&j| dominates(&points[j], &points[i])).map(|j| strength[j]).sum();
            let mut d: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| dist(&points[i], &points[j])).collect();
            let sigma = if d.is_empty() {
                0.0
            } else {
                let kk = k.min(d.len()) - 1;
                *d.select_nth_unstable_by(kk, f64::total_cmp).1
            };
            raw as f64 + 1.0 / (sigma + 2.0)
        })
        .collect()
}

/// Removes members one at a time, always the one whose sorted distances to
/// the remaining members are lexicographically smallest, until `size` remain.
fn truncate(points: &[[f64; 2]], mut members: Vec<usize>, size: usize) -> Vec<usize> {
    let m = members.len();
    let local: Vec<[f64; 2]> = members.iter().map(|&i| points[i]).collect();
    // neighbours of each member, nearest first
    let near: Vec<Vec<(f64, usize)>> = (0..m)
        .map(|i| {
            let mut v: Vec<(f64, usize)> =
                (0..m).filter(|&j| j != i).map(|j| (dist(&local[i], &local[j]), j)).collect();
            v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            v
        })
        .collect();
    let mut alive = vec![true; m];
    let mut remaining = m;
    let compare = |a: usize, b: usize, alive: &[bool]| -> Ordering {
        let da = near[a].iter().filter(|(_, j)| alive[*j]).map(|(d, _)| *d);
        let db = near[b].iter().filter(|(_, j)| alive[*j]).map(|(d, _)| *d);
        for (x, y) in da.zip(db) {
            match x.total_cmp(&y) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    };
    while remaining > size {
        let mut worst = usize::MAX;
        for i in (0..m).filter(|&i| alive[i]) {
            if worst == usize::MAX || compare(i, worst, &alive) == Ordering::Less {
                worst = i;
            }
        }
        alive[worst] = false;
        remaining -= 1;
    }
    let mut keep = Vec::with_capacity(size);
    for (i, idx) in members.drain(..).enumerate() {
        if alive[i] {
            keep.push(idx);
        }
    }
    keep
}

/// Indices of `points` forming the next archive of the given size.
fn environmental_selection(points: &[[f64; 2]], fitness: &[f64], size: usize) -> Vec<usize> {
    let nd: Vec<usize> = (0..points.len()).filter(|&i| fitness[i] < 1.0).collect();
    match nd.len().cmp(&size) {
        Ordering::Equal => nd,
        Ordering::Greater => truncate(points, nd, size),
        Ordering::Less => {
            let mut order: Vec<usize> = (0..points.len()).collect();
            order.sort_by(|&a, &b| fitness[a].total_cmp(&fitness[b]).then(a.cmp(&b)));
            order.truncate(size);
            order
        }
    }
}

pub fn run_spea2(problem: &MoProblem, cfg: &SpeaConfig) -> Result<MoResult> {
    run_spea2_observed(problem, cfg, &mut |_, _| {})
}

pub fn run_spea2_observed(problem: &MoProblem, cfg: &SpeaConfig, observer: Observer) -> Result<MoResult> {
    cfg.validate()?;
    let b = problem.bounds();
    let mut rng = rng::seeded(problem.seed);
    let mut xs = problem.random_population(cfg.population, &mut rng);
    let mut fs = problem.eval_all(&xs);
    let mut evaluations = xs.len();
    let (mut ax, mut af): (Vec<Vec<f64>>, Vec<[f64; 2]>) = (Vec::new(), Vec::new());

    for gen in 0..=problem.generations {
        let mut ux = std::mem::take(&mut ax);
        let mut uf = std::mem::take(&mut af);
        ux.append(&mut xs);
        uf.append(&mut fs);
        let fitness = spea2_fitness(&uf);
        let keep = environmental_selection(&uf, &fitness, cfg.archive);
        let afit: Vec<f64> = keep.iter().map(|&i| fitness[i]).collect();
        ax = keep.iter().map(|&i| ux[i].clone()).collect();
        af = keep.iter().map(|&i| uf[i]).collect();
        observer(gen, &ParetoArchive::from_population(&ax, &af));
        if gen == problem.generations {
            break;
        }
        let n = ax.len();
        while xs.len() < cfg.population {
            let p1 = tournament(n, &mut rng, |a, c| afit[a] < afit[c]);
            let p2 = tournament(n, &mut rng, |a, c| afit[a] < afit[c]);
            let (mut c1, mut c2) = sbx(&ax[p1], &ax[p2], cfg.eta_crossover, cfg.crossover_prob, b, &mut rng);
            polynomial_mutation(&mut c1, cfg.eta_mutation, cfg.mutation_prob, b, &mut rng);
            polynomial_mutation(&mut c2, cfg.eta_mutation, cfg.mutation_prob, b, &mut rng);
            xs.push(c1);
            xs.push(c2);
        }
        fs = problem.eval_all(&xs);
        evaluations += xs.len();
    }
    Ok(MoResult { archive: ParetoArchive::from_population(&ax, &af), evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fitness_of_chain() {
        // a dominates b dominates c; d is incomparable with all
        let pts = [[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [-1.0, 5.0]];
        let f = spea2_fitness(&pts);
        assert!(f[0] < 1.0 && f[3] < 1.0);
        // raw(b) = S(a) = 2, raw(c) = S(a) + S(b) = 3
        assert!((f[1] - 2.0).abs() < 1.0 && f[1] > 2.0);
        assert!(f[2] > 3.0 && f[2] < 4.0);
    }

    #[test]
    fn truncation_drops_crowded_member() {
        let pts = [[0.0, 1.0], [0.5, 0.5], [0.51, 0.49], [1.0, 0.0]];
        let keep = truncate(&pts, vec![0, 1, 2, 3], 3);
        assert_eq!(keep.len(), 3);
        assert!(keep.contains(&0) && keep.contains(&3));
    }
}
