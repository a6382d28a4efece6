use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const LEAKY_SLOPE: f64 = 0.3;
pub const ELU_ALPHA: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Activation {
    Elu,
    LeakyRelu,
    Relu,
    Softplus,
    Swish,
    Tanh,
    /// Linear pass-through; used for output layers.
    Identity,
}

impl Activation {
    /// The hidden-layer menu searched by the tuner.
    pub const MENU: [Activation; 6] =
        [Activation::Elu, Activation::LeakyRelu, Activation::Relu, Activation::Softplus, Activation::Swish, Activation::Tanh];

    pub fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Elu => {
                if z > 0.0 {
                    z
                } else {
                    ELU_ALPHA * z.exp_m1()
                }
            }
            Activation::LeakyRelu => {
                if z > 0.0 {
                    z
                } else {
                    LEAKY_SLOPE * z
                }
            }
            Activation::Relu => z.max(0.0),
            Activation::Softplus => z.max(0.0) + (-z.abs()).exp().ln_1p(),
            Activation::Swish => z * sigmoid(z),
            Activation::Tanh => z.tanh(),
            Activation::Identity => z,
        }
    }

    /// Derivative with respect to the pre-activation `z`.
    pub fn derivative(self, z: f64) -> f64 {
        match self {
            Activation::Elu => {
                if z > 0.0 {
                    1.0
                } else {
                    ELU_ALPHA * z.exp()
                }
            }
            Activation::LeakyRelu => {
                if z > 0.0 {
                    1.0
                } else {
                    LEAKY_SLOPE
                }
            }
            Activation::Relu => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Softplus => sigmoid(z),
            Activation::Swish => {
                let s = sigmoid(z);
                s + z * s * (1.0 - s)
            }
            Activation::Tanh => 1.0 - z.tanh().powi(2),
            Activation::Identity => 1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Activation::Elu => "elu",
            Activation::LeakyRelu => "leaky-relu",
            Activation::Relu => "relu",
            Activation::Softplus => "softplus",
            Activation::Swish => "swish",
            Activation::Tanh => "tanh",
            Activation::Identity => "identity",
        }
    }
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Activation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let all = Activation::MENU.iter().chain(std::iter::once(&Activation::Identity));
        all.copied()
            .find(|a| a.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown activation '{s}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_match_differences() {
        for a in Activation::MENU {
            for &z in &[-3.1, -0.7, -0.01, 0.02, 0.9, 4.2] {
                let h = 1e-6;
                let fd = (a.apply(z + h) - a.apply(z - h)) / (2.0 * h);
                assert!((fd - a.derivative(z)).abs() < 1e-7, "{a} at {z}");
            }
        }
    }

    #[test]
    fn known_values() {
        assert_eq!(Activation::LeakyRelu.apply(-1.0), -0.3);
        assert!((Activation::Softplus.apply(0.0) - 2f64.ln()).abs() < 1e-15);
        assert!((Activation::Elu.apply(-1.0) - (1.0f64.exp().recip() - 1.0)).abs() < 1e-15);
        assert_eq!(Activation::Swish.apply(0.0), 0.0);
        assert!(Activation::Softplus.apply(800.0).is_finite());
    }

    #[test]
    fn names_round_trip() {
        for a in Activation::MENU {
            assert_eq!(a.as_str().parse::<Activation>().unwrap(), a);
        }
        assert!("gelu".parse::<Activation>().is_err());
    }
}
