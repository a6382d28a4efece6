//! Regression error measures.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetMetrics {
    /// Mean absolute percentage error, %.
    pub mape: f64,
    /// RMSE relative to the observed range, %.
    pub rrmse: f64,
    pub r2: f64,
    /// Rows left out of the MAPE because the observation is zero.
    pub mape_excluded: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub targets: Vec<TargetMetrics>,
}

impl MetricsReport {
    fn mean(&self, f: impl Fn(&TargetMetrics) -> f64) -> f64 {
        self.targets.iter().map(f).sum::<f64>() / self.targets.len() as f64
    }

    pub fn mean_mape(&self) -> f64 {
        self.mean(|t| t.mape)
    }

    pub fn mean_rrmse(&self) -> f64 {
        self.mean(|t| t.rrmse)
    }

    pub fn mean_r2(&self) -> f64 {
        self.mean(|t| t.r2)
    }
}

pub fn target_metrics(y: &[f64], yhat: &[f64]) -> Result<TargetMetrics> {
    if y.len() != yhat.len() {
        return Err(Error::Shape { expected: y.len(), got: yhat.len() });
    }
    let n = y.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("metrics need at least two rows, got {n}")));
    }
    let mut ape = 0.0;
    let mut used = 0usize;
    for (a, p) in y.iter().zip(yhat) {
        if *a != 0.0 {
            ape += ((a - p) / a).abs();
            used += 1;
        }
    }
    if used == 0 {
        return Err(Error::Numerical("MAPE undefined: every observation is zero".into()));
    }
    let (lo, hi) = y.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
    if hi <= lo {
        return Err(Error::Numerical("rRMSE and R² undefined for constant observations".into()));
    }
    let ss_res: f64 = y.iter().zip(yhat).map(|(a, p)| (a - p) * (a - p)).sum();
    let mean = y.iter().sum::<f64>() / n as f64;
    let ss_tot: f64 = y.iter().map(|a| (a - mean) * (a - mean)).sum();
    Ok(TargetMetrics {
        mape: ape / used as f64 * 100.0,
        rrmse: (ss_res / n as f64).sqrt() / (hi - lo) * 100.0,
        r2: 1.0 - ss_res / ss_tot,
        mape_excluded: n - used,
    })
}

/// Metrics for each output column.
pub fn metrics<R: AsRef<[f64]>>(y: &[R], yhat: &[R]) -> Result<MetricsReport> {
    if y.len() != yhat.len() {
        return Err(Error::Shape { expected: y.len(), got: yhat.len() });
    }
    let k = y.first().map_or(0, |r| r.as_ref().len());
    let column = |rows: &[R], j: usize| rows.iter().map(|r| r.as_ref()[j]).collect::<Vec<f64>>();
    let targets = (0..k).map(|j| target_metrics(&column(y, j), &column(yhat, j))).collect::<Result<_>>()?;
    Ok(MetricsReport { targets })
}
