//! Simulated binary crossover and polynomial mutation, both bounded.

use rand::Rng as _;

use crate::bounds::Bounds;
use crate::rng::Rng;

const EPS: f64 = 1e-14;

/// Children of `p1` and `p2`; with probability `1 - p_c` they are copies.
/// Each variable is recombined with probability 1/2.
pub fn sbx(p1: &[f64], p2: &[f64], eta: f64, p_c: f64, bounds: &Bounds, rng: &mut Rng) -> (Vec<f64>, Vec<f64>) {
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    if rng.random::<f64>() >= p_c {
        return (c1, c2);
    }
    for j in 0..p1.len() {
        if rng.random::<f64>() > 0.5 || (p1[j] - p2[j]).abs() <= EPS {
            continue;
        }
        let (y1, y2) = if p1[j] < p2[j] { (p1[j], p2[j]) } else { (p2[j], p1[j]) };
        let (lo, hi) = (bounds.lower()[j], bounds.upper()[j]);
        let u: f64 = rng.random();
        let spread = |beta: f64| {
            let alpha = 2.0 - beta.powf(-(eta + 1.0));
            if u <= 1.0 / alpha {
                (u * alpha).powf(1.0 / (eta + 1.0))
            } else {
                (1.0 / (2.0 - u * alpha)).powf(1.0 / (eta + 1.0))
            }
        };
        let bq1 = spread(1.0 + 2.0 * (y1 - lo) / (y2 - y1));
        let bq2 = spread(1.0 + 2.0 * (hi - y2) / (y2 - y1));
        let mut a = (0.5 * ((y1 + y2) - bq1 * (y2 - y1))).clamp(lo, hi);
        let mut b = (0.5 * ((y1 + y2) + bq2 * (y2 - y1))).clamp(lo, hi);
        if rng.random::<f64>() <= 0.5 {
            std::mem::swap(&mut a, &mut b);
        }
        c1[j] = a;
        c2[j] = b;
    }
    (c1, c2)
}

/// Mutates each variable with probability `p_m`.
pub fn polynomial_mutation(x: &mut [f64], eta: f64, p_m: f64, bounds: &Bounds, rng: &mut Rng) {
    for j in 0..x.len() {
        if rng.random::<f64>() >= p_m {
            continue;
        }
        let (lo, hi) = (bounds.lower()[j], bounds.upper()[j]);
        let y = x[j];
        let d1 = (y - lo) / (hi - lo);
        let d2 = (hi - y) / (hi - lo);
        let u: f64 = rng.random();
        let pow = 1.0 / (eta + 1.0);
        let dq = if u <= 0.5 {
            let v = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1).powf(eta + 1.0);
            v.powf(pow) - 1.0
        } else {
            let v = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2).powf(eta + 1.0);
            1.0 - v.powf(pow)
        };
        x[j] = (y + dq * (hi - lo)).clamp(lo, hi);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Bounds {
        Bounds::uniform(5, 0.0, 1.0).unwrap()
    }

    #[test]
    fn no_crossover_copies_parents() {
        let mut rng = crate::rng::seeded(1);
        let (p1, p2) = (vec![0.1; 5], vec![0.9; 5]);
        assert_eq!(sbx(&p1, &p2, 20.0, 0.0, &b(), &mut rng), (p1, p2));
    }

    #[test]
    fn identical_parents() {
        let mut rng = crate::rng::seeded(2);
        let p = vec![0.3, 0.4, 0.5, 0.6, 0.7];
        let (c1, c2) = sbx(&p, &p, 20.0, 1.0, &b(), &mut rng);
        assert_eq!((c1, c2), (p.clone(), p));
    }

    #[test]
    fn children_feasible() {
        let mut rng = crate::rng::seeded(3);
        for _ in 0..2000 {
            let p1: Vec<f64> = (0..5).map(|_| rng.random()).collect();
            let p2: Vec<f64> = (0..5).map(|_| rng.random()).collect();
            let (mut c1, c2) = sbx(&p1, &p2, 2.0, 1.0, &b(), &mut rng);
            polynomial_mutation(&mut c1, 2.0, 1.0, &b(), &mut rng);
            assert!(b().contains(&c1) && b().contains(&c2));
        }
    }

    #[test]
    fn mutation_concentrates_with_eta() {
        let mut rng = crate::rng::seeded(4);
        let bounds = Bounds::uniform(1, 0.0, 1.0).unwrap();
        let mut mean_step = |eta: f64| {
            (0..10_000)
                .map(|_| {
                    let mut x = [0.5];
                    polynomial_mutation(&mut x, eta, 1.0, &bounds, &mut rng);
                    (x[0] - 0.5).abs()
                })
                .sum::<f64>()
                / 10_000.0
        };
        let steps: Vec<f64> = [1.0, 20.0, 200.0, 2000.0].iter().map(|&e| mean_step(e)).collect();
        assert!(steps.windows(2).all(|w| w[1] < w[0]), "{steps:?}");
        assert!(steps[3] < 1e-3);
    }
}
