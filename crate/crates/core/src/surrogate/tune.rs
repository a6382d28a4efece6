//! Seeded random search over network settings, scored by mean
//! cross-validated R² over all targets.

use rand::seq::{IndexedRandom, SliceRandom};
use rayon::prelude::*;

use crate::dataset::{kfold, Dataset, DatasetScaler};
use crate::error::{Error, Result};
use crate::rng;

use super::activation::Activation;
use super::config::{MlpConfig, LEARNING_RATES, MAX_LAYERS, MAX_NEURONS};
use super::init::Initializer;
use super::metrics::metrics;
use super::train::fit;

const SAMPLE_STREAM: u64 = 21;
const SUBSAMPLE_STREAM: u64 = 22;

/// Candidate values per setting. Neurons and dropout are drawn per layer.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace {
    pub layers: Vec<usize>,
    pub neurons: Vec<usize>,
    pub dropout: Vec<f64>,
    pub learning_rates: Vec<f64>,
    pub activations: Vec<Activation>,
    pub initializers: Vec<Initializer>,
}

impl Default for SearchSpace {
    fn default() -> Self {
        Self {
            layers: (1..=MAX_LAYERS).collect(),
            neurons: (1..=MAX_NEURONS / 2).map(|k| 2 * k).collect(),
            dropout: (0..=8).map(|k| k as f64 / 10.0).collect(),
            learning_rates: LEARNING_RATES.to_vec(),
            activations: Activation::MENU.to_vec(),
            initializers: Initializer::MENU.to_vec(),
        }
    }
}

impl SearchSpace {
    /// The space containing only `cfg` (uniform layer widths and dropout).
    pub fn point(cfg: &MlpConfig) -> Result<Self> {
        let uniform = |v: &[usize]| v.windows(2).all(|w| w[0] == w[1]);
        if !uniform(&cfg.hidden) || cfg.dropout.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::InvalidArgument("a single-point space needs equal widths and dropout per layer".into()));
        }
        Ok(Self {
            layers: vec![cfg.hidden.len()],
            neurons: vec![cfg.hidden[0]],
            dropout: vec![cfg.dropout[0]],
            learning_rates: vec![cfg.learning_rate],
            activations: vec![cfg.activation],
            initializers: vec![cfg.initializer],
        })
    }

    fn validate(&self) -> Result<()> {
        if self.layers.is_empty()
            || self.neurons.is_empty()
            || self.dropout.is_empty()
            || self.learning_rates.is_empty()
            || self.activations.is_empty()
            || self.initializers.is_empty()
        {
            return Err(Error::InvalidArgument("every search-space setting needs at least one value".into()));
        }
        Ok(())
    }

    /// Draws a configuration; training settings come from `template`.
    pub fn sample(&self, template: &MlpConfig, rng: &mut rng::Rng) -> MlpConfig {
        let depth = *self.layers.choose(rng).expect("non-empty");
        let hidden = (0..depth).map(|_| *self.neurons.choose(rng).expect("non-empty")).collect();
        let dropout = (0..depth).map(|_| *self.dropout.choose(rng).expect("non-empty")).collect();
        MlpConfig {
            hidden,
            dropout,
            learning_rate: *self.learning_rates.choose(rng).expect("non-empty"),
            activation: *self.activations.choose(rng).expect("non-empty"),
            initializer: *self.initializers.choose(rng).expect("non-empty"),
            ..template.clone()
        }
    }
}

#[derive(Debug, Clone)]
pub struct TuneOptions {
    /// Randomly drawn configurations.
    pub trials: usize,
    pub folds: usize,
    pub seed: u64,
    /// Batch size, epochs, patience and validation share for every trial.
    pub template: MlpConfig,
    /// Rows used for the search (seeded subset), all when `None`.
    pub subsample: Option<usize>,
    /// Configurations scored ahead of the random draws.
    pub include: Vec<MlpConfig>,
}

impl Default for TuneOptions {
    fn default() -> Self {
        Self { trials: 500, folds: 5, seed: 0, template: MlpConfig::default(), subsample: None, include: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trial {
    pub index: usize,
    pub config: MlpConfig,
    /// Mean R² over targets, per fold; `-inf` for a diverged fold.
    pub fold_scores: Vec<f64>,
    pub score: f64,
}

#[derive(Debug, Clone)]
pub struct TuneResult {
    pub best: usize,
    pub trials: Vec<Trial>,
}

impl TuneResult {
    pub fn best_trial(&self) -> &Trial {
        &self.trials[self.best]
    }
}

fn score_fold(cfg: &MlpConfig, data: &Dataset, train: &[usize], valid: &[usize], seed: u64) -> Result<f64> {
    let tr = data.subset(train);
    let va = data.subset(valid);
    let scaler = DatasetScaler::fit(&tr)?;
    let (tx, ty) = scaler.transform(&tr);
    let (vx, vy) = scaler.transform(&va);
    let ty: Vec<Vec<f64>> = ty.iter().map(|r| r.to_vec()).collect();
    let vy: Vec<Vec<f64>> = vy.iter().map(|r| r.to_vec()).collect();
    let (net, _) = match fit(cfg, &tx, &ty, seed) {
        Ok(v) => v,
        Err(Error::Diverged { .. }) => return Ok(f64::NEG_INFINITY),
        Err(e) => return Err(e),
    };
    let pred: Vec<Vec<f64>> = vx.iter().map(|x| net.forward_unchecked(x)).collect();
    Ok(metrics(&vy, &pred)?.mean_r2())
}

/// Scores `include` then `trials` random configurations on `data`
/// (unscaled). Trials and folds run on the rayon pool; results do not depend
/// on the thread count.
pub fn tune(space: &SearchSpace, data: &Dataset, opts: &TuneOptions) -> Result<TuneResult> {
    space.validate()?;
    if opts.trials + opts.include.len() == 0 {
        return Err(Error::InvalidArgument("tuning needs at least one trial".into()));
    }
    for c in &opts.include {
        c.validate()?;
    }
    let mut rows: Vec<usize> = (0..data.len()).collect();
    if let Some(k) = opts.subsample.filter(|&k| k < data.len()) {
        rows.shuffle(&mut rng::stream(opts.seed, SUBSAMPLE_STREAM));
        rows.truncate(k);
        rows.sort_unstable();
    }
    let folds = kfold(&rows, opts.folds, opts.seed)?;

    let mut sampler = rng::stream(opts.seed, SAMPLE_STREAM);
    let mut configs = opts.include.clone();
    configs.extend((0..opts.trials).map(|_| space.sample(&opts.template, &mut sampler)));

    let jobs: Vec<(usize, usize)> = (0..configs.len()).flat_map(|t| (0..folds.len()).map(move |f| (t, f))).collect();
    let scores = jobs
        .par_iter()
        .map(|&(t, f)| score_fold(&configs[t], data, &folds[f].train, &folds[f].valid, rng::derive(opts.seed, t as u64, f as u64)))
        .collect::<Result<Vec<f64>>>()?;

    let trials: Vec<Trial> = configs
        .into_iter()
        .enumerate()
        .map(|(index, config)| {
            let fold_scores = scores[index * folds.len()..(index + 1) * folds.len()].to_vec();
            let score = fold_scores.iter().sum::<f64>() / fold_scores.len() as f64;
            Trial { index, config, fold_scores, score }
        })
        .collect();
    let mut best = 0;
    for t in &trials {
        if t.score > trials[best].score {
            best = t.index;
        }
    }
    Ok(TuneResult { best, trials })
}
