#![allow(dead_code)]

use rand_distr::{Distribution, StandardNormal};
use shapelet_core::{Rng, TimeSeriesDataset};

pub fn normal(rng: &mut Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// `n×m` Gaussian dataset with alternating labels 0/1.
pub fn random_dataset(rng: &mut Rng, n: usize, m: usize) -> TimeSeriesDataset {
    let rows = (0..n)
        .map(|_| (0..m).map(|_| normal(rng)).collect())
        .collect();
    let labels = (0..n).map(|i| (i % 2) as i64).collect();
    TimeSeriesDataset::new(rows, labels).unwrap()
}

pub fn max_abs_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
