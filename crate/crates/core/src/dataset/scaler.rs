//! Per-column min-max scaling to `[0, 1]` over the fitted rows.

use std::fmt::Write as _;

use crate::error::{Error, Result};

use super::Dataset;

#[derive(Debug, Clone, PartialEq)]
pub struct MinMaxScaler {
    min: Vec<f64>,
    max: Vec<f64>,
}

impl MinMaxScaler {
    pub fn from_ranges(min: Vec<f64>, max: Vec<f64>) -> Result<Self> {
        if min.len() != max.len() {
            return Err(Error::Shape { expected: min.len(), got: max.len() });
        }
        for (j, (lo, hi)) in min.iter().zip(&max).enumerate() {
            if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
                return Err(Error::InvalidArgument(format!("column {j}: scaler needs min < max (got {lo}, {hi})")));
            }
        }
        Ok(Self { min, max })
    }

    pub fn fit<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or_else(|| Error::InvalidArgument("cannot fit a scaler on zero rows".into()))?;
        let m = first.as_ref().len();
        let mut min = vec![f64::INFINITY; m];
        let mut max = vec![f64::NEG_INFINITY; m];
        for r in rows {
            let r = r.as_ref();
            if r.len() != m {
                return Err(Error::Shape { expected: m, got: r.len() });
            }
            for j in 0..m {
                min[j] = min[j].min(r[j]);
                max[j] = max[j].max(r[j]);
            }
        }
        if let Some(j) = (0..m).find(|&j| min[j] >= max[j]) {
            return Err(Error::InvalidArgument(format!("column {j} is constant ({}); cannot scale", min[j])));
        }
        Self::from_ranges(min, max)
    }

    pub fn dim(&self) -> usize {
        self.min.len()
    }

    pub fn min(&self) -> &[f64] {
        &self.min
    }

    pub fn max(&self) -> &[f64] {
        &self.max
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        v.iter().enumerate().map(|(j, x)| (x - self.min[j]) / (self.max[j] - self.min[j])).collect()
    }

    pub fn invert(&self, v: &[f64]) -> Vec<f64> {
        v.iter().enumerate().map(|(j, s)| self.min[j] + s * (self.max[j] - self.min[j])).collect()
    }

    /// True when some value falls outside the fitted range.
    pub fn out_of_range(&self, v: &[f64]) -> bool {
        v.iter().enumerate().any(|(j, x)| *x < self.min[j] || *x > self.max[j])
    }

    pub fn write_text(&self, name: &str, out: &mut String) {
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        let _ = writeln!(out, "scaler {name} {}", self.dim());
        let _ = writeln!(out, "min {}", join(&self.min));
        let _ = writeln!(out, "max {}", join(&self.max));
    }

    /// Parses the three lines written by [`write_text`](Self::write_text).
    pub fn read_text<'a>(name: &str, lines: &mut impl Iterator<Item = &'a str>) -> std::result::Result<Self, String> {
        let head = lines.next().ok_or("missing scaler record")?;
        let parts: Vec<&str> = head.split_whitespace().collect();
        if parts.len() != 3 || parts[0] != "scaler" || parts[1] != name {
            return Err(format!("expected 'scaler {name} <n>', found '{head}'"));
        }
        let n: usize = parts[2].parse().map_err(|_| format!("invalid scaler size '{}'", parts[2]))?;
        let mut row = |tag: &str| -> std::result::Result<Vec<f64>, String> {
            let line = lines.next().ok_or_else(|| format!("missing '{tag}' line"))?;
            let mut it = line.split_whitespace();
            if it.next() != Some(tag) {
                return Err(format!("expected '{tag} ...', found '{line}'"));
            }
            let v = it.map(|s| s.parse::<f64>().map_err(|_| format!("invalid number '{s}'"))).collect::<std::result::Result<Vec<_>, _>>()?;
            if v.len() != n {
                return Err(format!("'{tag}' has {} values, expected {n}", v.len()));
            }
            Ok(v)
        };
        let min = row("min")?;
        let max = row("max")?;
        Self::from_ranges(min, max).map_err(|e| e.to_string())
    }
}

/// Feature and target scalers, both fitted on training rows only.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetScaler {
    pub x: MinMaxScaler,
    pub y: MinMaxScaler,
}

impl DatasetScaler {
    pub fn fit(train: &Dataset) -> Result<Self> {
        Ok(Self { x: MinMaxScaler::fit(train.x())?, y: MinMaxScaler::fit(train.y())? })
    }

    pub fn scale_x(&self, x: &[f64]) -> Vec<f64> {
        self.x.apply(x)
    }

    pub fn scale_y(&self, y: &[f64; 2]) -> [f64; 2] {
        let v = self.y.apply(y);
        [v[0], v[1]]
    }

    pub fn unscale_y(&self, y: &[f64]) -> [f64; 2] {
        let v = self.y.invert(y);
        [v[0], v[1]]
    }

    /// Scaled `(x, y)` row matrices.
    pub fn transform(&self, data: &Dataset) -> (Vec<Vec<f64>>, Vec<[f64; 2]>) {
        (data.x().iter().map(|r| self.scale_x(r)).collect(), data.y().iter().map(|r| self.scale_y(r)).collect())
    }
}
