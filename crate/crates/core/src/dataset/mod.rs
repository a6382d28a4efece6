//! Sample matrices and their preprocessing: outlier filtering, min-max
//! scaling and partitioning.

pub mod lof;
pub mod scaler;
pub mod split;

use std::path::Path;

use crate::error::{Error, Result};
use crate::table::{feature_header, Table};

pub use lof::{lof_filter, lof_scores, standardize, LofOutcome};
pub use scaler::{DatasetScaler, MinMaxScaler};
pub use split::{kfold, split, Fold, Split};

pub const TARGETS: [&str; 2] = ["cp", "cd"];

/// Feature rows `x` (offsets, m) with targets `y = (Cp, Cd)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: Vec<Vec<f64>>,
    y: Vec<[f64; 2]>,
}

impl Dataset {
    pub fn new(x: Vec<Vec<f64>>, y: Vec<[f64; 2]>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::Shape { expected: x.len(), got: y.len() });
        }
        let m = x.first().map_or(0, Vec::len);
        for (i, row) in x.iter().enumerate() {
            if row.len() != m {
                return Err(Error::Shape { expected: m, got: row.len() });
            }
            if row.iter().chain(&y[i]).any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument(format!("row {i} contains a non-finite value")));
            }
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> &[Vec<f64>] {
        &self.x
    }

    pub fn y(&self) -> &[[f64; 2]] {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.x.first().map_or(0, Vec::len)
    }

    pub fn subset(&self, rows: &[usize]) -> Self {
        Self { x: rows.iter().map(|&i| self.x[i].clone()).collect(), y: rows.iter().map(|&i| self.y[i]).collect() }
    }

    /// Rows where `keep` is true.
    pub fn filter(&self, keep: &[bool]) -> Self {
        let rows: Vec<usize> = keep.iter().enumerate().filter(|(_, &k)| k).map(|(i, _)| i).collect();
        self.subset(&rows)
    }

    /// Features followed by targets, one row per sample.
    pub fn joined(&self) -> Vec<Vec<f64>> {
        self.x.iter().zip(&self.y).map(|(x, y)| x.iter().chain(y).copied().collect()).collect()
    }

    pub fn to_table(&self) -> Table {
        let mut header = feature_header(self.n_features());
        header.extend(TARGETS.iter().map(|s| s.to_string()));
        let mut t = Table::new(header);
        t.rows = self.joined();
        t
    }

    /// Requires the header `x1,...,xm,cp,cd`.
    pub fn from_table(table: &Table, origin: &Path) -> Result<Self> {
        let cols = table.header.len();
        let m = cols.saturating_sub(2);
        let mut expected = feature_header(m);
        expected.extend(TARGETS.iter().map(|s| s.to_string()));
        if cols < 3 || table.header != expected {
            return Err(Error::parse(
                origin,
                table.header_line.max(1),
                format!("expected header '{}', found '{}'", expected.join(","), table.header.join(",")),
            ));
        }
        let x = table.rows.iter().map(|r| r[..m].to_vec()).collect();
        let y = table.rows.iter().map(|r| [r[m], r[m + 1]]).collect();
        Self::new(x, y)
    }
}

/// Filtering, partitioning and scaling settings.
#[derive(Debug, Clone)]
pub struct PrepConfig {
    pub lof_neighbors: usize,
    pub lof_threshold: f64,
    pub train_ratio: f64,
    pub seed: u64,
}

impl Default for PrepConfig {
    fn default() -> Self {
        Self { lof_neighbors: 20, lof_threshold: 1.5, train_ratio: 0.8, seed: 0 }
    }
}

/// Outcome of filter, then split, then scale (scaler fitted on train rows).
#[derive(Debug, Clone)]
pub struct Prepared {
    pub data: Dataset,
    pub lof: LofOutcome,
    pub split: Split,
    pub scaler: DatasetScaler,
}

impl Prepared {
    pub fn train(&self) -> Dataset {
        self.data.subset(&self.split.train)
    }

    pub fn test(&self) -> Dataset {
        self.data.subset(&self.split.test)
    }
}

pub fn prepare(data: &Dataset, cfg: &PrepConfig) -> Result<Prepared> {
    let lof = lof_filter(&standardize(&data.joined()), cfg.lof_neighbors, cfg.lof_threshold)?;
    let data = data.filter(&lof.keep);
    let split = split(data.len(), cfg.train_ratio, cfg.seed)?;
    let scaler = DatasetScaler::fit(&data.subset(&split.train))?;
    Ok(Prepared { data, lof, split, scaler })
}
