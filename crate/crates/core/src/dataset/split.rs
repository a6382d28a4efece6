//! Seeded train/test split and k-fold partitions over row indices.

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng;

const SPLIT_STREAM: u64 = 1;
const FOLD_STREAM: u64 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Shuffles `0..n` and cuts after `round(ratio * n)` rows.
pub fn split(n: usize, ratio: f64, seed: u64) -> Result<Split> {
    if !(0.0..=1.0).contains(&ratio) {
        return Err(Error::InvalidArgument(format!("split ratio {ratio} outside [0, 1]")));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut rng::stream(seed, SPLIT_STREAM));
    let cut = (ratio * n as f64).round() as usize;
    let test = idx.split_off(cut);
    Ok(Split { train: idx, test })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fold {
    pub train: Vec<usize>,
    pub valid: Vec<usize>,
}

/// `k` folds over `rows`; validation chunks are contiguous in shuffled order
/// and differ in size by at most one.
pub fn kfold(rows: &[usize], k: usize, seed: u64) -> Result<Vec<Fold>> {
    let n = rows.len();
    if k < 2 || k > n {
        return Err(Error::InvalidArgument(format!("k-fold needs 2 <= k <= n (k = {k}, n = {n})")));
    }
    let mut idx = rows.to_vec();
    idx.shuffle(&mut rng::stream(seed, FOLD_STREAM));
    let (base, extra) = (n / k, n % k);
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for f in 0..k {
        let len = base + usize::from(f < extra);
        let valid = idx[start..start + len].to_vec();
        let train = idx[..start].iter().chain(&idx[start + len..]).copied().collect();
        folds.push(Fold { train, valid });
        start += len;
    }
    Ok(folds)
}
