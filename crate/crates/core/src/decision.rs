//! TOPSIS ranking of alternatives by closeness to the ideal solution.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::evaluator::ObjectivePair;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Benefit,
    Cost,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Benefit => "benefit",
            Direction::Cost => "cost",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "benefit" => Ok(Direction::Benefit),
            "cost" => Ok(Direction::Cost),
            other => Err(Error::InvalidArgument(format!("unknown criterion direction '{other}'"))),
        }
    }
}

/// Alternatives (rows) scored on criteria (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionMatrix {
    values: Vec<Vec<f64>>,
    weights: Vec<f64>,
    directions: Vec<Direction>,
}

impl DecisionMatrix {
    /// Weights must be non-negative and sum to 1 (within 1e-9).
    pub fn new(values: Vec<Vec<f64>>, weights: Vec<f64>, directions: Vec<Direction>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("decision matrix needs at least one alternative".into()));
        }
        let m = weights.len();
        if m == 0 || directions.len() != m || values.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidArgument("criteria, weights and directions must agree in length".into()));
        }
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("decision matrix values must be finite".into()));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!("weights {weights:?} must be non-negative and sum to 1")));
        }
        Ok(Self { values, weights, directions })
    }

    /// Cp as a benefit and Cd as a cost criterion.
    pub fn from_objectives(points: &[ObjectivePair], weights: [f64; 2]) -> Result<Self> {
        Self::new(
            points.iter().map(|p| vec![p.cp, p.cd]).collect(),
            weights.to_vec(),
            vec![Direction::Benefit, Direction::Cost],
        )
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    /// Relative closeness per alternative, in input order.
    pub closeness: Vec<f64>,
    /// Alternative indices, best first; ties keep the lower index first.
    pub order: Vec<usize>,
}

impl Ranking {
    pub fn best(&self) -> usize {
        self.order[0]
    }

    /// 1-based rank of every alternative.
    pub fn ranks(&self) -> Vec<usize> {
        let mut r = vec![0; self.order.len()];
        for (pos, &i) in self.order.iter().enumerate() {
            r[i] = pos + 1;
        }
        r
    }
}

pub fn topsis(matrix: &DecisionMatrix) -> Result<Ranking> {
    let n = matrix.values.len();
    let m = matrix.weights.len();
    let mut weighted = vec![vec![0.0; m]; n];
    for j in 0..m {
        let norm = matrix.values.iter().map(|r| r[j] * r[j]).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidArgument(format!("criterion {} is zero for every alternative", j + 1)));
        }
        for i in 0..n {
            weighted[i][j] = matrix.weights[j] * matrix.values[i][j] / norm;
        }
    }
    let column = |j: usize| weighted.iter().map(move |r| r[j]);
    let (best, worst): (Vec<f64>, Vec<f64>) = (0..m)
        .map(|j| {
            let hi = column(j).fold(f64::NEG_INFINITY, f64::max);
            let lo = column(j).fold(f64::INFINITY, f64::min);
            match matrix.directions[j] {
                Direction::Benefit => (hi, lo),
                Direction::Cost => (lo, hi),
            }
        })
        .unzip();
    let distance = |r: &[f64], to: &[f64]| r.iter().zip(to).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let closeness: Vec<f64> = weighted
        .iter()
        .map(|r| {
            let (dp, dn) = (distance(r, &best), distance(r, &worst));
            if dp == 0.0 {
                1.0
            } else {
                dn / (dp + dn)
            }
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| closeness[b].total_cmp(&closeness[a]).then(a.cmp(&b)));
    Ok(Ranking { closeness, order })
}
