//! Success-history adaptive differential evolution with linear population
//! size reduction.
//!
//! current-to-pbest/1 mutation with an external archive, binomial crossover,
//! weighted Lehmer-mean memory updates, and bound repair to the midpoint
//! between the parent coordinate and the violated bound. The population
//! shrinks linearly over the generation budget from `initial_population` to
//! `min_population`, dropping the worst members.

use rand::Rng as _;
use rand_distr::{Cauchy, Distribution, Normal};

use crate::error::{Error, Result};
use crate::rng;

use super::{Recorder, SoProblem, SoResult};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LshadeConfig {
    pub initial_population: usize,
    pub min_population: usize,
    pub memory_size: usize,
    /// Archive capacity relative to the current population size.
    pub archive_rate: f64,
    /// Share of the population eligible as pbest.
    pub pbest_rate: f64,
}

impl Default for LshadeConfig {
    fn default() -> Self {
        Self { initial_population: 200, min_population: 4, memory_size: 6, archive_rate: 2.6, pbest_rate: 0.11 }
    }
}

/// Population size after `generation` of `generations` (generation 0 is the
/// initial population).
pub fn population_schedule(cfg: &LshadeConfig, generation: usize, generations: usize) -> usize {
    let (n0, nmin) = (cfg.initial_population as f64, cfg.min_population as f64);
    (n0 + (nmin - n0) * generation as f64 / generations as f64).round() as usize
}

fn lehmer(values: &[f64], weights: &[f64]) -> f64 {
    let num: f64 = values.iter().zip(weights).map(|(v, w)| w * v * v).sum();
    let den: f64 = values.iter().zip(weights).map(|(v, w)| w * v).sum();
    num / den
}

pub fn run_lshade(problem: &SoProblem, cfg: &LshadeConfig) -> Result<SoResult> {
    if cfg.min_population < 4 || cfg.initial_population <= cfg.min_population {
        return Err(Error::InvalidArgument("L-SHADE needs initial population > minimum population >= 4".into()));
    }
    if cfg.memory_size == 0 || !(cfg.pbest_rate > 0.0 && cfg.pbest_rate <= 1.0) || cfg.archive_rate < 0.0 {
        return Err(Error::InvalidArgument("L-SHADE needs memory size >= 1, 0 < p <= 1, archive rate >= 0".into()));
    }
    let b = problem.bounds();
    let d = problem.dim();
    let gens = problem.generations;
    let mut rng = rng::seeded(problem.seed);
    let mut x: Vec<Vec<f64>> = (0..cfg.initial_population)
        .map(|_| (0..d).map(|j| rng.random_range(b.lower()[j]..=b.upper()[j])).collect())
        .collect();
    let mut f = problem.eval_all(&x);
    let mut rec = Recorder::new(d);
    rec.observe(&x, &f);
    rec.end_iteration(0);

    // None marks the terminal crossover value.
    let mut m_cr: Vec<Option<f64>> = vec![Some(0.5); cfg.memory_size];
    let mut m_f = vec![0.5; cfg.memory_size];
    let mut k = 0;
    let mut archive: Vec<Vec<f64>> = Vec::new();

    for gen in 1..=gens {
        let n = x.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &c| f[a].total_cmp(&f[c]).then(a.cmp(&c)));
        let top = ((cfg.pbest_rate * n as f64).round() as usize).clamp(2, n);

        let mut trials = Vec::with_capacity(n);
        let mut crs = Vec::with_capacity(n);
        let mut fs = Vec::with_capacity(n);
        for i in 0..n {
            let r = rng.random_range(0..cfg.memory_size);
            let cr = match m_cr[r] {
                None => 0.0,
                Some(mu) => Normal::new(mu, 0.1).expect("valid normal").sample(&mut rng).clamp(0.0, 1.0),
            };
            let cauchy = Cauchy::new(m_f[r], 0.1).expect("valid cauchy");
            let mut fi: f64 = cauchy.sample(&mut rng);
            while fi <= 0.0 {
                fi = cauchy.sample(&mut rng);
            }
            let fi = fi.min(1.0);

            let pbest = order[rng.random_range(0..top)];
            let r1 = loop {
                let c = rng.random_range(0..n);
                if c != i {
                    break c;
                }
            };
            let r2 = loop {
                let c = rng.random_range(0..n + archive.len());
                if c != i && c != r1 {
                    break c;
                }
            };
            let x2 = if r2 < n { &x[r2] } else { &archive[r2 - n] };
            let jrand = rng.random_range(0..d);
            let mut u = x[i].clone();
            for j in 0..d {
                if j == jrand || rng.random::<f64>() < cr {
                    let mut v = x[i][j] + fi * (x[pbest][j] - x[i][j]) + fi * (x[r1][j] - x2[j]);
                    if v < b.lower()[j] {
                        v = (b.lower()[j] + x[i][j]) / 2.0;
                    } else if v > b.upper()[j] {
                        v = (b.upper()[j] + x[i][j]) / 2.0;
                    }
                    u[j] = v;
                }
            }
            trials.push(u);
            crs.push(cr);
            fs.push(fi);
        }
        let fu = problem.eval_all(&trials);
        rec.observe(&trials, &fu);

        let (mut s_cr, mut s_f, mut delta) = (Vec::new(), Vec::new(), Vec::new());
        for (i, u) in trials.into_iter().enumerate() {
            if fu[i] <= f[i] {
                if fu[i] < f[i] {
                    s_cr.push(crs[i]);
                    s_f.push(fs[i]);
                    delta.push(f[i] - fu[i]);
                    archive.push(std::mem::replace(&mut x[i], u));
                } else {
                    x[i] = u;
                }
                f[i] = fu[i];
            }
        }
        if !s_f.is_empty() {
            let total: f64 = delta.iter().sum();
            let w: Vec<f64> = if total > 0.0 && total.is_finite() {
                delta.iter().map(|v| v / total).collect()
            } else {
                vec![1.0 / delta.len() as f64; delta.len()]
            };
            m_cr[k] = match m_cr[k] {
                None => None,
                Some(_) if s_cr.iter().all(|&c| c == 0.0) => None,
                Some(_) => Some(lehmer(&s_cr, &w)),
            };
            m_f[k] = lehmer(&s_f, &w);
            k = (k + 1) % cfg.memory_size;
        }

        let target = population_schedule(cfg, gen, gens).max(cfg.min_population);
        if target < x.len() {
            let mut order: Vec<usize> = (0..x.len()).collect();
            order.sort_by(|&a, &c| f[a].total_cmp(&f[c]).then(a.cmp(&c)));
            order.truncate(target);
            order.sort_unstable();
            x = order.iter().map(|&i| x[i].clone()).collect();
            f = order.iter().map(|&i| f[i]).collect();
        }
        let cap = (cfg.archive_rate * x.len() as f64).round() as usize;
        while archive.len() > cap {
            let idx = rng.random_range(0..archive.len());
            archive.swap_remove(idx);
        }
        rec.end_iteration(gen);
    }
    Ok(rec.finish(x.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::{rosenbrock, sphere};
    use crate::bounds::Bounds;

    #[test]
    fn schedule_endpoints() {
        let c = LshadeConfig::default();
        assert_eq!(population_schedule(&c, 0, 500), 200);
        assert_eq!(population_schedule(&c, 500, 500), 4);
        assert_eq!(population_schedule(&c, 250, 500), 102);
        for g in 0..500 {
            assert!(population_schedule(&c, g + 1, 500) <= population_schedule(&c, g, 500));
        }
    }

    #[test]
    fn lehmer_mean() {
        assert!((lehmer(&[0.5, 1.0], &[0.5, 0.5]) - 1.25 / 1.5).abs() < 1e-15);
    }

    #[test]
    fn sphere_eighteen() {
        let p = SoProblem::new(sphere, Bounds::uniform(18, -5.0, 5.0).unwrap(), 500, 1).unwrap();
        let r = run_lshade(&p, &LshadeConfig::default()).unwrap();
        assert!(r.best_f < 1e-8, "{}", r.best_f);
        assert_eq!(r.final_population, 4);
    }

    #[test]
    fn rosenbrock_ten() {
        let p = SoProblem::new(rosenbrock, Bounds::uniform(10, -5.0, 5.0).unwrap(), 500, 1).unwrap();
        let r = run_lshade(&p, &LshadeConfig::default()).unwrap();
        assert!(r.best_f < 1e-2, "{}", r.best_f);
    }
}
