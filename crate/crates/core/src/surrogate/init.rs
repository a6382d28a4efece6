//! Weight initializers: Glorot, He and Lecun scaling, each with a uniform or
//! a truncated-normal draw. Biases start at zero.

use std::fmt;
use std::str::FromStr;

use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::rng::Rng;

/// Standard deviation of a unit normal truncated to `[-2, 2]`.
const TRUNCATED_STD: f64 = 0.879_625_661_034_239_8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scaling {
    /// `2 / (fan_in + fan_out)`
    Glorot,
    /// `2 / fan_in`
    He,
    /// `1 / fan_in`
    Lecun,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Distribution {
    Normal,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Initializer {
    pub scaling: Scaling,
    pub distribution: Distribution,
}

impl Initializer {
    pub const MENU: [Initializer; 6] = [
        Initializer { scaling: Scaling::Glorot, distribution: Distribution::Normal },
        Initializer { scaling: Scaling::Glorot, distribution: Distribution::Uniform },
        Initializer { scaling: Scaling::He, distribution: Distribution::Normal },
        Initializer { scaling: Scaling::He, distribution: Distribution::Uniform },
        Initializer { scaling: Scaling::Lecun, distribution: Distribution::Normal },
        Initializer { scaling: Scaling::Lecun, distribution: Distribution::Uniform },
    ];

    pub const LECUN_NORMAL: Initializer = Initializer { scaling: Scaling::Lecun, distribution: Distribution::Normal };

    /// Target variance of the weights.
    pub fn variance(&self, fan_in: usize, fan_out: usize) -> f64 {
        match self.scaling {
            Scaling::Glorot => 2.0 / (fan_in + fan_out) as f64,
            Scaling::He => 2.0 / fan_in as f64,
            Scaling::Lecun => 1.0 / fan_in as f64,
        }
    }

    pub fn sample(&self, fan_in: usize, fan_out: usize, rng: &mut Rng) -> f64 {
        let var = self.variance(fan_in, fan_out);
        match self.distribution {
            Distribution::Uniform => {
                let limit = (3.0 * var).sqrt();
                rng.random_range(-limit..limit)
            }
            Distribution::Normal => {
                let sd = var.sqrt() / TRUNCATED_STD;
                loop {
                    let z: f64 = rng.sample(StandardNormal);
                    if z.abs() <= 2.0 {
                        break z * sd;
                    }
                }
            }
        }
    }
}

impl fmt::Display for Initializer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.scaling {
            Scaling::Glorot => "glorot",
            Scaling::He => "he",
            Scaling::Lecun => "lecun",
        };
        let d = match self.distribution {
            Distribution::Normal => "normal",
            Distribution::Uniform => "uniform",
        };
        write!(f, "{s}-{d}")
    }
}

impl FromStr for Initializer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Initializer::MENU
            .iter()
            .copied()
            .find(|i| i.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown initializer '{s}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empirical_variance() {
        let mut rng = crate::rng::seeded(5);
        for init in Initializer::MENU {
            let n = 200_000;
            let draws: Vec<f64> = (0..n).map(|_| init.sample(16, 8, &mut rng)).collect();
            let var = draws.iter().map(|v| v * v).sum::<f64>() / n as f64;
            let want = init.variance(16, 8);
            assert!((var / want - 1.0).abs() < 0.02, "{init}: {var} vs {want}");
            if init.distribution == Distribution::Normal {
                let bound = 2.0 * want.sqrt() / TRUNCATED_STD;
                assert!(draws.iter().all(|v| v.abs() <= bound));
            }
        }
    }

    #[test]
    fn names() {
        assert_eq!("lecun-normal".parse::<Initializer>().unwrap(), Initializer::LECUN_NORMAL);
        assert!("xavier".parse::<Initializer>().is_err());
    }
}
