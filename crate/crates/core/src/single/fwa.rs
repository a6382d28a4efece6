//! Fireworks algorithm in its original form: fitness-proportional spark
//! counts and amplitudes, Gaussian mutation sparks, the modular mapping
//! rule for sparks outside the box, and distance-based selection.
//!
//! Amplitudes are kept within `[min_amplitude, max_amplitude]` (fractions of
//! each box width) so the best firework still explores.

use rand::seq::index::sample;
use rand::Rng as _;
use rand_distr::{Distribution, Normal};

use crate::bounds::Bounds;
use crate::error::{Error, Result};
use crate::rng;

use super::pso::argmin;
use super::{Recorder, SoProblem, SoResult};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FwaConfig {
    pub fireworks: usize,
    /// Explosion sparks shared among fireworks per generation.
    pub explosion_sparks: usize,
    /// Gaussian sparks per generation.
    pub gaussian_sparks: usize,
    /// Spark-count limits as fractions of `explosion_sparks`.
    pub min_share: f64,
    pub max_share: f64,
    /// Amplitude limits as fractions of the box width.
    pub max_amplitude: f64,
    pub min_amplitude: f64,
}

impl Default for FwaConfig {
    fn default() -> Self {
        Self {
            fireworks: 20,
            explosion_sparks: 10,
            gaussian_sparks: 10,
            min_share: 0.04,
            max_share: 0.8,
            max_amplitude: 0.4,
            min_amplitude: 1e-3,
        }
    }
}

const TINY: f64 = f64::EPSILON;

/// `lb + |x| mod (ub - lb)` for coordinates outside the box.
pub fn map_into_box(x: &mut [f64], b: &Bounds) {
    for (j, v) in x.iter_mut().enumerate() {
        let (lo, hi) = (b.lower()[j], b.upper()[j]);
        if *v < lo || *v > hi {
            *v = lo + v.abs() % (hi - lo);
        }
    }
}

fn spark_counts(f: &[f64], cfg: &FwaConfig) -> Vec<usize> {
    let worst = f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let total: f64 = f.iter().map(|v| worst - v).sum();
    let m = cfg.explosion_sparks as f64;
    let lo = (cfg.min_share * m).round().max(1.0);
    let hi = (cfg.max_share * m).round().max(lo);
    f.iter()
        .map(|v| {
            let s = m * (worst - v + TINY) / (total + TINY);
            s.round().clamp(lo, hi) as usize
        })
        .collect()
}

fn amplitudes(f: &[f64], cfg: &FwaConfig) -> Vec<f64> {
    let best = f.iter().copied().fold(f64::INFINITY, f64::min);
    let total: f64 = f.iter().map(|v| v - best).sum();
    f.iter()
        .map(|v| {
            let a = cfg.max_amplitude * (v - best + TINY) / (total + TINY);
            a.clamp(cfg.min_amplitude.min(cfg.max_amplitude), cfg.max_amplitude)
        })
        .collect()
}

fn random_dims(d: usize, rng: &mut rng::Rng) -> Vec<usize> {
    let k = rng.random_range(1..=d);
    sample(rng, d, k).into_vec()
}

pub fn run_fwa(problem: &SoProblem, cfg: &FwaConfig) -> Result<SoResult> {
    if cfg.fireworks == 0 {
        return Err(Error::InvalidArgument("FWA needs at least one firework".into()));
    }
    if !(0.0 < cfg.min_share && cfg.min_share < cfg.max_share && cfg.max_share < 1.0) {
        return Err(Error::InvalidArgument("FWA spark shares need 0 < min < max < 1".into()));
    }
    if cfg.max_amplitude < 0.0 || cfg.min_amplitude < 0.0 {
        return Err(Error::InvalidArgument("FWA amplitudes must be non-negative".into()));
    }
    let b = problem.bounds();
    let d = problem.dim();
    let mut rng = rng::seeded(problem.seed);
    let gauss = Normal::new(1.0, 1.0).expect("valid normal");
    let mut x: Vec<Vec<f64>> =
        (0..cfg.fireworks).map(|_| (0..d).map(|j| rng.random_range(b.lower()[j]..=b.upper()[j])).collect()).collect();
    let mut f = problem.eval_all(&x);
    let mut rec = Recorder::new(d);
    rec.observe(&x, &f);
    rec.end_iteration(0);

    for gen in 0..problem.generations {
        let counts = if cfg.explosion_sparks == 0 { vec![0; x.len()] } else { spark_counts(&f, cfg) };
        let amps = amplitudes(&f, cfg);
        let mut sparks: Vec<Vec<f64>> = Vec::new();
        for i in 0..x.len() {
            for _ in 0..counts[i] {
                let mut s = x[i].clone();
                let h: f64 = rng.random_range(-1.0..=1.0);
                for j in random_dims(d, &mut rng) {
                    s[j] += amps[i] * h * b.width(j);
                }
                map_into_box(&mut s, b);
                sparks.push(s);
            }
        }
        for _ in 0..cfg.gaussian_sparks {
            let i = rng.random_range(0..x.len());
            let mut s = x[i].clone();
            let g = gauss.sample(&mut rng);
            for j in random_dims(d, &mut rng) {
                s[j] *= g;
            }
            map_into_box(&mut s, b);
            sparks.push(s);
        }
        let fs = problem.eval_all(&sparks);
        rec.observe(&sparks, &fs);

        let mut pool = std::mem::take(&mut x);
        pool.extend(sparks);
        let mut pool_f = std::mem::take(&mut f);
        pool_f.extend(fs);
        let (nx, nf) = select(pool, pool_f, cfg.fireworks, &mut rng);
        x = nx;
        f = nf;
        rec.end_iteration(gen + 1);
    }
    Ok(rec.finish(x.len()))
}

/// Keeps the best candidate, then draws the rest without replacement with
/// probability proportional to their summed distance to all candidates.
fn select(pool: Vec<Vec<f64>>, pool_f: Vec<f64>, n: usize, rng: &mut rng::Rng) -> (Vec<Vec<f64>>, Vec<f64>) {
    let k = pool.len();
    let best = argmin(&pool_f);
    let mut weight: Vec<f64> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| pool[i].iter().zip(&pool[j]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
                .sum()
        })
        .collect();
    let mut chosen = vec![best];
    weight[best] = 0.0;
    let mut taken = vec![false; k];
    taken[best] = true;
    while chosen.len() < n.min(k) {
        let total: f64 = (0..k).filter(|&i| !taken[i]).map(|i| weight[i]).sum();
        let pick = if total > 0.0 {
            let mut r = rng.random::<f64>() * total;
            let mut pick = None;
            for i in (0..k).filter(|&i| !taken[i]) {
                pick = Some(i);
                if r < weight[i] {
                    break;
                }
                r -= weight[i];
            }
            pick.expect("a candidate remains")
        } else {
            (0..k).find(|&i| !taken[i]).expect("a candidate remains")
        };
        taken[pick] = true;
        chosen.push(pick);
    }
    let f = chosen.iter().map(|&i| pool_f[i]).collect();
    let mut pool = pool.into_iter().map(Some).collect::<Vec<_>>();
    let x = chosen.iter().map(|&i| pool[i].take().expect("chosen once")).collect();
    (x, f)
}
