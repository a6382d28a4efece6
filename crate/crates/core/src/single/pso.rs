//! Particle swarm with a generation-dependent inertia weight.
//!
//! Positions leaving the box are set onto the violated bound and the
//! corresponding velocity component changes sign.

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng;

use super::{Recorder, SoProblem, SoResult};

#[derive(Debug, Clone, Copy)]
pub enum Inertia {
    /// Linear from `start` at the first generation to `end` at the last.
    Linear { start: f64, end: f64 },
    Constant(f64),
    /// Any schedule `(generation, generations) -> weight`.
    Custom(fn(usize, usize) -> f64),
}

impl Inertia {
    pub fn weight(&self, generation: usize, generations: usize) -> f64 {
        match *self {
            Inertia::Linear { start, end } => {
                let frac = if generations <= 1 { 1.0 } else { generation as f64 / (generations - 1) as f64 };
                start + (end - start) * frac
            }
            Inertia::Constant(w) => w,
            Inertia::Custom(f) => f(generation, generations),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PsoConfig {
    pub particles: usize,
    pub inertia: Inertia,
    pub cognitive: f64,
    pub social: f64,
    /// Velocity limit per dimension as a fraction of the box width.
    pub max_velocity: f64,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self { particles: 20, inertia: Inertia::Linear { start: 0.9, end: 0.4 }, cognitive: 2.0, social: 2.0, max_velocity: 0.2 }
    }
}

pub fn run_pso(problem: &SoProblem, cfg: &PsoConfig) -> Result<SoResult> {
    if cfg.particles < 2 {
        return Err(Error::InvalidArgument("PSO needs at least two particles".into()));
    }
    if !(cfg.max_velocity > 0.0) {
        return Err(Error::InvalidArgument("PSO velocity limit must be positive".into()));
    }
    let b = problem.bounds();
    let d = problem.dim();
    let vmax: Vec<f64> = (0..d).map(|j| cfg.max_velocity * b.width(j)).collect();
    let mut rng = rng::seeded(problem.seed);
    let mut x: Vec<Vec<f64>> =
        (0..cfg.particles).map(|_| (0..d).map(|j| rng.random_range(b.lower()[j]..=b.upper()[j])).collect()).collect();
    let mut v: Vec<Vec<f64>> =
        (0..cfg.particles).map(|_| (0..d).map(|j| rng.random_range(-vmax[j]..=vmax[j])).collect()).collect();
    let mut rec = Recorder::new(d);
    let f = problem.eval_all(&x);
    rec.observe(&x, &f);
    rec.end_iteration(0);
    let mut pbest = x.clone();
    let mut pbest_f = f;
    let mut g = argmin(&pbest_f);

    for gen in 0..problem.generations {
        let w = cfg.inertia.weight(gen, problem.generations);
        for i in 0..cfg.particles {
            for j in 0..d {
                let r1: f64 = rng.random();
                let r2: f64 = rng.random();
                let mut vel = w * v[i][j]
                    + cfg.cognitive * r1 * (pbest[i][j] - x[i][j])
                    + cfg.social * r2 * (pbest[g][j] - x[i][j]);
                vel = vel.clamp(-vmax[j], vmax[j]);
                let mut pos = x[i][j] + vel;
                if pos < b.lower()[j] {
                    pos = b.lower()[j];
                    vel = -vel;
                } else if pos > b.upper()[j] {
                    pos = b.upper()[j];
                    vel = -vel;
                }
                x[i][j] = pos;
                v[i][j] = vel;
            }
        }
        let f = problem.eval_all(&x);
        rec.observe(&x, &f);
        for i in 0..cfg.particles {
            if f[i] < pbest_f[i] {
                pbest_f[i] = f[i];
                pbest[i].clone_from(&x[i]);
            }
        }
        g = argmin(&pbest_f);
        rec.end_iteration(gen + 1);
    }
    Ok(rec.finish(cfg.particles))
}

/// Index of the smallest value, first on ties.
pub(crate) fn argmin(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &f) in v.iter().enumerate() {
        if f < v[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::sphere;
    use crate::bounds::Bounds;

    #[test]
    fn inertia_schedule() {
        let s = Inertia::Linear { start: 0.9, end: 0.4 };
        assert_eq!(s.weight(0, 500), 0.9);
        assert!((s.weight(499, 500) - 0.4).abs() < 1e-15);
        assert_eq!(Inertia::Custom(|g, _| g as f64).weight(3, 10), 3.0);
    }

    #[test]
    fn constant_objective_flat_trace() {
        let p = SoProblem::new(|_| 1.0, Bounds::uniform(3, -1.0, 1.0).unwrap(), 30, 1).unwrap();
        let r = run_pso(&p, &PsoConfig::default()).unwrap();
        assert!(r.trace.iter().all(|t| t.best_f == 1.0));
        assert!(p.bounds().contains(&r.best_x));
    }

    #[test]
    fn sphere_converges() {
        let p = SoProblem::new(sphere, Bounds::uniform(14, -0.25, 0.25).unwrap(), 500, 3).unwrap();
        let r = run_pso(&p, &PsoConfig::default()).unwrap();
        assert!(r.best_f < 1e-6, "{}", r.best_f);
        assert_eq!(r.trace.len(), 501);
        assert_eq!(r.evaluations, 20 * 501);
    }
}
