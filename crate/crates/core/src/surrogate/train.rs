//! Mini-batch Adam on mean squared error with early stopping.

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng;

use super::config::MlpConfig;
use super::network::Mlp;

pub const ADAM_BETA1: f64 = 0.9;
pub const ADAM_BETA2: f64 = 0.999;
pub const ADAM_EPSILON: f64 = 1e-8;

const INIT_STREAM: u64 = 11;
const VALIDATION_STREAM: u64 = 12;
const SHUFFLE_STREAM: u64 = 13;
const DROPOUT_STREAM: u64 = 14;

#[derive(Debug, Clone)]
pub struct Adam {
    lr: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Adam {
    pub fn new(n_params: usize, lr: f64) -> Self {
        Self { lr, m: vec![0.0; n_params], v: vec![0.0; n_params], t: 0 }
    }

    pub fn step(&mut self, params: &mut [f64], grad: &[f64]) {
        self.t += 1;
        let c1 = 1.0 - ADAM_BETA1.powi(self.t);
        let c2 = 1.0 - ADAM_BETA2.powi(self.t);
        for i in 0..params.len() {
            let g = grad[i];
            self.m[i] = ADAM_BETA1 * self.m[i] + (1.0 - ADAM_BETA1) * g;
            self.v[i] = ADAM_BETA2 * self.v[i] + (1.0 - ADAM_BETA2) * g * g;
            let mhat = self.m[i] / c1;
            let vhat = self.v[i] / c2;
            params[i] -= self.lr * mhat / (vhat.sqrt() + ADAM_EPSILON);
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct History {
    /// Mean mini-batch loss per epoch (dropout active).
    pub train_loss: Vec<f64>,
    /// Loss on the monitored rows per epoch.
    pub val_loss: Vec<f64>,
    pub best_epoch: usize,
    pub best_val: f64,
    pub stopped_early: bool,
}

impl History {
    pub fn epochs_run(&self) -> usize {
        self.train_loss.len()
    }
}

/// Trains `net` in place and restores the parameters of the best monitored
/// epoch. With `cfg.validation == 0` the training loss is monitored.
pub fn train(net: &mut Mlp, xs: &[Vec<f64>], ys: &[Vec<f64>], cfg: &MlpConfig, seed: u64) -> Result<History> {
    if xs.len() != ys.len() {
        return Err(Error::Shape { expected: xs.len(), got: ys.len() });
    }
    if xs.iter().any(|x| x.len() != net.n_inputs()) || ys.iter().any(|y| y.len() != net.n_outputs()) {
        return Err(Error::Shape { expected: net.n_inputs(), got: xs.first().map_or(0, Vec::len) });
    }
    if cfg.batch_size == 0 || !(cfg.learning_rate > 0.0) {
        return Err(Error::InvalidArgument("batch size and learning rate must be positive".into()));
    }
    let mut rows: Vec<usize> = (0..xs.len()).collect();
    rows.shuffle(&mut rng::stream(seed, VALIDATION_STREAM));
    let n_val = (cfg.validation * xs.len() as f64).round() as usize;
    let (val_rows, train_rows) = rows.split_at(n_val);
    let mut train_rows = train_rows.to_vec();
    if train_rows.is_empty() {
        return Err(Error::InvalidArgument("no training rows left after the validation hold-out".into()));
    }
    let (vx, vy): (Vec<Vec<f64>>, Vec<Vec<f64>>) = if val_rows.is_empty() {
        (train_rows.iter().map(|&i| xs[i].clone()).collect(), train_rows.iter().map(|&i| ys[i].clone()).collect())
    } else {
        (val_rows.iter().map(|&i| xs[i].clone()).collect(), val_rows.iter().map(|&i| ys[i].clone()).collect())
    };

    let mut shuffle = rng::stream(seed, SHUFFLE_STREAM);
    let mut drop_rng = rng::stream(seed, DROPOUT_STREAM);
    let mut params = net.params();
    let mut adam = Adam::new(params.len(), cfg.learning_rate);
    let mut grad = vec![0.0; params.len()];
    let mut trace = net.trace();
    let n_out = net.n_outputs();
    let mut dout = vec![0.0; n_out];

    let mut history = History { best_val: f64::INFINITY, ..History::default() };
    let mut best_params = params.clone();
    let mut wait = 0;
    for epoch in 0..cfg.epochs {
        train_rows.shuffle(&mut shuffle);
        let mut epoch_loss = 0.0;
        for batch in train_rows.chunks(cfg.batch_size) {
            grad.iter_mut().for_each(|g| *g = 0.0);
            let scale = 1.0 / (batch.len() * n_out) as f64;
            let mut batch_loss = 0.0;
            for &i in batch {
                net.forward_train(&xs[i], &cfg.dropout, &mut drop_rng, &mut trace);
                for (k, (p, t)) in net.output(&trace).iter().zip(&ys[i]).enumerate() {
                    let e = p - t;
                    batch_loss += e * e * scale;
                    dout[k] = 2.0 * e * scale;
                }
                net.backward(&mut trace, &dout, &mut grad);
            }
            adam.step(&mut params, &grad);
            net.set_params(&params)?;
            epoch_loss += batch_loss * batch.len() as f64;
        }
        epoch_loss /= train_rows.len() as f64;
        let val = net.mse(&vx, &vy);
        history.train_loss.push(epoch_loss);
        history.val_loss.push(val);
        if !epoch_loss.is_finite() || !val.is_finite() {
            return Err(Error::Diverged { epoch, loss: if epoch_loss.is_finite() { val } else { epoch_loss } });
        }
        if val < history.best_val {
            history.best_val = val;
            history.best_epoch = epoch;
            best_params.copy_from_slice(&params);
            wait = 0;
        } else {
            wait += 1;
            if wait >= cfg.patience {
                history.stopped_early = true;
                break;
            }
        }
    }
    net.set_params(&best_params)?;
    Ok(history)
}

/// Builds a network for `cfg` and trains it.
pub fn fit(cfg: &MlpConfig, xs: &[Vec<f64>], ys: &[Vec<f64>], seed: u64) -> Result<(Mlp, History)> {
    let n_in = xs.first().map_or(0, Vec::len);
    let n_out = ys.first().map_or(0, Vec::len);
    let mut net =
        Mlp::new(n_in, &cfg.hidden, n_out, cfg.activation, cfg.initializer, &mut rng::stream(seed, INIT_STREAM))?;
    let history = train(&mut net, xs, ys, cfg, seed)?;
    Ok((net, history))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surrogate::activation::Activation;
    use rand::Rng as _;

    fn linear_problem(n: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let mut rng = rng::seeded(seed);
        let xs: Vec<Vec<f64>> = (0..n).map(|_| (0..3).map(|_| rng.random::<f64>()).collect()).collect();
        let ys = xs
            .iter()
            .map(|x| vec![0.2 + 0.5 * x[0] - 0.3 * x[1] + 0.1 * x[2], 0.6 - 0.2 * x[0] + 0.25 * x[2]])
            .collect();
        (xs, ys)
    }

    #[test]
    fn fits_linear_target() {
        let (xs, ys) = linear_problem(400, 1);
        let cfg = MlpConfig {
            hidden: vec![8],
            dropout: vec![0.0],
            activation: Activation::Tanh,
            learning_rate: 1e-2,
            validation: 0.0,
            ..MlpConfig::default()
        };
        let (net, h) = fit(&cfg, &xs, &ys, 3).unwrap();
        assert!(net.mse(&xs, &ys) < 1e-4, "{}", net.mse(&xs, &ys));
        assert!(h.epochs_run() <= 512);
    }

    #[test]
    fn deterministic() {
        let (xs, ys) = linear_problem(100, 2);
        let cfg = MlpConfig { hidden: vec![6, 4], dropout: vec![0.2, 0.0], epochs: 20, ..MlpConfig::default() };
        let a = fit(&cfg, &xs, &ys, 9).unwrap();
        let b = fit(&cfg, &xs, &ys, 9).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
    }

    #[test]
    fn patience_zero_stops_at_first_non_improvement() {
        let (xs, ys) = linear_problem(200, 4);
        let cfg = MlpConfig { patience: 0, learning_rate: 8e-2, ..MlpConfig::default() };
        let (_, h) = fit(&cfg, &xs, &ys, 5).unwrap();
        let first_bad = h.val_loss.windows(2).position(|w| w[1] >= w[0]).map(|p| p + 1);
        if let Some(e) = first_bad {
            assert_eq!(h.epochs_run(), e + 1);
            assert!(h.stopped_early);
        }
    }

    #[test]
    fn restores_best_weights() {
        let (xs, ys) = linear_problem(300, 6);
        let cfg = MlpConfig { patience: 3, learning_rate: 8e-2, epochs: 200, ..MlpConfig::default() };
        let (net, h) = fit(&cfg, &xs, &ys, 8).unwrap();
        assert!(h.val_loss.iter().all(|&v| v >= h.best_val));
        // the monitored rows are the first 10% of the seeded shuffle
        let mut rows: Vec<usize> = (0..xs.len()).collect();
        rows.shuffle(&mut rng::stream(8, VALIDATION_STREAM));
        let val: Vec<usize> = rows[..30].to_vec();
        let vx: Vec<Vec<f64>> = val.iter().map(|&i| xs[i].clone()).collect();
        let vy: Vec<Vec<f64>> = val.iter().map(|&i| ys[i].clone()).collect();
        assert_eq!(net.mse(&vx, &vy), h.best_val);
    }

    #[test]
    fn full_batch_descent_is_monotone_on_linear_problem() {
        let (xs, ys) = linear_problem(50, 7);
        let mut net = Mlp::from_layers(vec![crate::surrogate::network::Layer::zeros(3, 2)], Activation::Identity).unwrap();
        let mut params = net.params();
        let mut last = f64::INFINITY;
        for _ in 0..200 {
            let (loss, g) = net.loss_and_gradient(&xs, &ys).unwrap();
            assert!(loss <= last);
            last = loss;
            for (p, gi) in params.iter_mut().zip(&g) {
                *p -= 0.05 * gi;
            }
            net.set_params(&params).unwrap();
        }
    }

    #[test]
    fn divergence_is_reported() {
        let xs = vec![vec![0.5, 0.5]; 20];
        let ys = vec![vec![1e300, 1.0]; 20];
        let cfg = MlpConfig { hidden: vec![4], dropout: vec![0.0], activation: Activation::Tanh, ..MlpConfig::default() };
        assert!(matches!(fit(&cfg, &xs, &ys, 1), Err(Error::Diverged { .. })));
    }
}
