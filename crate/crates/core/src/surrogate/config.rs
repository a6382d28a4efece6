use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

use super::activation::Activation;
use super::init::Initializer;

pub const MAX_LAYERS: usize = 5;
pub const MAX_NEURONS: usize = 32;
pub const MAX_DROPOUT_STEPS: u32 = 8;
/// Learning-rate menu: `{1, 2, 4, 6, 8} x 10^-k`, `k = 2, 3, 4`.
pub const LEARNING_RATES: [f64; 15] =
    [1e-2, 2e-2, 4e-2, 6e-2, 8e-2, 1e-3, 2e-3, 4e-3, 6e-3, 8e-3, 1e-4, 2e-4, 4e-4, 6e-4, 8e-4];

/// Network and training settings.
///
/// Text form: space-separated `key=value` pairs, lists joined by `-`:
/// `hidden=22-22-20-24-4 dropout=0-0-0-0-0 lr=0.002 activation=swish
/// init=lecun-normal batch=32 epochs=512 patience=32 validation=0.1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpConfig {
    pub hidden: Vec<usize>,
    /// Drop rate after each hidden layer, multiples of 0.1.
    pub dropout: Vec<f64>,
    pub learning_rate: f64,
    pub activation: Activation,
    pub initializer: Initializer,
    pub batch_size: usize,
    pub epochs: usize,
    /// Non-improving epochs tolerated before stopping.
    pub patience: usize,
    /// Share of the training rows held back to monitor early stopping.
    pub validation: f64,
}

impl Default for MlpConfig {
    fn default() -> Self {
        Self {
            hidden: vec![16, 16],
            dropout: vec![0.0, 0.0],
            learning_rate: 2e-3,
            activation: Activation::Swish,
            initializer: Initializer::LECUN_NORMAL,
            batch_size: 32,
            epochs: 512,
            patience: 32,
            validation: 0.1,
        }
    }
}

impl MlpConfig {
    /// Tuned network for the fixed-width scenarios.
    pub fn scenario_one() -> Self {
        Self { hidden: vec![22, 22, 20, 24, 4], dropout: vec![0.0; 5], activation: Activation::Swish, ..Self::default() }
    }

    /// Tuned network for the free-width scenarios.
    pub fn scenario_two() -> Self {
        Self { hidden: vec![26, 24, 32, 12, 6], dropout: vec![0.0; 5], activation: Activation::Elu, ..Self::default() }
    }

    /// Checks every field against the search space.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if self.hidden.is_empty() || self.hidden.len() > MAX_LAYERS {
            return bad(format!("hidden layer count {} outside 1..={MAX_LAYERS}", self.hidden.len()));
        }
        if let Some(n) = self.hidden.iter().find(|&&n| n < 2 || n > MAX_NEURONS || n % 2 != 0) {
            return bad(format!("neuron count {n} is not an even number in 2..={MAX_NEURONS}"));
        }
        if self.dropout.len() != self.hidden.len() {
            return bad(format!("{} dropout rates for {} hidden layers", self.dropout.len(), self.hidden.len()));
        }
        if let Some(p) = self.dropout.iter().find(|&&p| dropout_step(p).is_none()) {
            return bad(format!("dropout {p} is not one of 0.0, 0.1, ..., 0.8"));
        }
        if !LEARNING_RATES.iter().any(|r| (r - self.learning_rate).abs() <= 1e-9 * r) {
            return bad(format!("learning rate {} is not in the menu", self.learning_rate));
        }
        if self.activation == Activation::Identity {
            return bad("identity is not a hidden-layer activation".into());
        }
        if self.batch_size == 0 || self.epochs == 0 {
            return bad("batch size and epochs must be positive".into());
        }
        if !(0.0..0.5).contains(&self.validation) {
            return bad(format!("validation share {} outside [0, 0.5)", self.validation));
        }
        Ok(())
    }
}

fn dropout_step(p: f64) -> Option<u32> {
    let k = (p * 10.0).round();
    ((0.0..=MAX_DROPOUT_STEPS as f64).contains(&k) && (p - k / 10.0).abs() < 1e-9).then_some(k as u32)
}

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("-")
}

impl fmt::Display for MlpConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "hidden={} dropout={} lr={} activation={} init={} batch={} epochs={} patience={} validation={}",
            join(&self.hidden),
            join(&self.dropout),
            self.learning_rate,
            self.activation,
            self.initializer,
            self.batch_size,
            self.epochs,
            self.patience,
            self.validation
        )
    }
}

impl FromStr for MlpConfig {
    type Err = Error;

    /// Missing keys keep their default; the result is not validated.
    fn from_str(s: &str) -> Result<Self> {
        let mut c = MlpConfig::default();
        let mut dropout_given = false;
        for tok in s.split_whitespace() {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("expected key=value, found '{tok}'")))?;
            let num = |v: &str| v.parse::<f64>().map_err(|_| Error::InvalidArgument(format!("{k}: invalid number '{v}'")));
            let int = |v: &str| v.parse::<usize>().map_err(|_| Error::InvalidArgument(format!("{k}: invalid integer '{v}'")));
            match k {
                "hidden" => c.hidden = v.split('-').map(int).collect::<Result<_>>()?,
                "dropout" => {
                    c.dropout = v.split('-').map(num).collect::<Result<_>>()?;
                    dropout_given = true;
                }
                "lr" => c.learning_rate = num(v)?,
                "activation" => c.activation = v.parse()?,
                "init" => c.initializer = v.parse()?,
                "batch" => c.batch_size = int(v)?,
                "epochs" => c.epochs = int(v)?,
                "patience" => c.patience = int(v)?,
                "validation" => c.validation = num(v)?,
                _ => return Err(Error::InvalidArgument(format!("unknown network setting '{k}'"))),
            }
        }
        if !dropout_given {
            c.dropout = vec![0.0; c.hidden.len()];
        }
        Ok(c)
    }
}
