//! Multi-output MLP surrogate: network, training, metrics, tuning and
//! persistence.

pub mod activation;
pub mod config;
pub mod init;
pub mod metrics;
pub mod model;
pub mod network;
pub mod train;
pub mod tune;

pub use activation::Activation;
pub use config::MlpConfig;
pub use init::Initializer;
pub use metrics::{metrics, MetricsReport, TargetMetrics};
pub use model::SurrogateModel;
pub use network::{Layer, Mlp};
pub use train::{fit, train, History};
pub use tune::{tune, SearchSpace, TuneOptions, TuneResult};

use crate::dataset::{Dataset, DatasetScaler};
use crate::error::Result;

/// Fits scalers on `train`, trains a network for `cfg`, and wraps both.
pub fn train_surrogate(cfg: &MlpConfig, train: &Dataset, seed: u64) -> Result<(SurrogateModel, History)> {
    cfg.validate()?;
    let scaler = DatasetScaler::fit(train)?;
    let (xs, ys) = scaler.transform(train);
    let ys: Vec<Vec<f64>> = ys.iter().map(|r| r.to_vec()).collect();
    let (net, history) = fit(cfg, &xs, &ys, seed)?;
    Ok((SurrogateModel::new(net, scaler, cfg.clone())?, history))
}

/// Metrics of `model` on `data`, in original units.
pub fn evaluate(model: &SurrogateModel, data: &Dataset) -> Result<MetricsReport> {
    let pred = data
        .x()
        .iter()
        .map(|x| model.predict(x).map(|p| vec![p.cp, p.cd]))
        .collect::<Result<Vec<_>>>()?;
    let y: Vec<Vec<f64>> = data.y().iter().map(|r| r.to_vec()).collect();
    metrics(&y, &pred)
}
