//! Analytic test functions with known optima.

use std::f64::consts::PI;

pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// Minimum 0 at all ones.
pub fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2).map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2)).sum()
}

pub fn rastrigin(x: &[f64]) -> f64 {
    10.0 * x.len() as f64 + x.iter().map(|v| v * v - 10.0 * (2.0 * PI * v).cos()).sum::<f64>()
}

/// Two objectives on `[0, 1]^n`; the Pareto front is `f2 = 1 - sqrt(f1)`
/// where `x[1..] = 0`.
pub fn zdt1(x: &[f64]) -> [f64; 2] {
    let f1 = x[0];
    let g = 1.0 + 9.0 * x[1..].iter().sum::<f64>() / (x.len() - 1) as f64;
    [f1, g * (1.0 - (f1 / g).sqrt())]
}

/// Dominated area of the ZDT1 front against `(1, 1)`.
pub const ZDT1_HYPERVOLUME: f64 = 2.0 / 3.0;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn optima() {
        assert_eq!(sphere(&[0.0; 5]), 0.0);
        assert_eq!(rosenbrock(&[1.0; 10]), 0.0);
        assert!(rastrigin(&[0.0; 5]).abs() < 1e-12);
        let f = zdt1(&[0.25, 0.0, 0.0]);
        assert_eq!(f, [0.25, 0.5]);
    }
}
