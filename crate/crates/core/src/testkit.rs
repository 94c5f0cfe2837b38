//! Brute-force oracles and synthetic data.
//!
//! The oracles are deliberately naive and do not call into the kernels they
//! are used to check.

use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::nn::PairwiseState;
use crate::sampling::Rng;
use crate::types::{PruningThreshold, Shapelet, TimeSeriesDataset};

/// Largest number of segment pairs [`exact_threshold`] will enumerate.
pub const EXACT_THRESHOLD_PAIR_LIMIT: u128 = 10_000_000;

/// Minimum distance of `shapelet` to each series, by full triple loop.
pub fn naive_min_dist_all(shapelet: &Shapelet, dataset: &TimeSeriesDataset) -> Result<Vec<f64>> {
    let len = shapelet.values.len();
    let m = dataset.series_len();
    if len == 0 || len > m {
        return Err(Error::ShapeletLength {
            length: len,
            series_len: m,
        });
    }
    let mut out = Vec::with_capacity(dataset.n_series());
    for i in 0..dataset.n_series() {
        let row = dataset.row(i);
        let mut best = f64::INFINITY;
        for j in 0..=(m - len) {
            let mut sum = 0.0;
            for k in 0..len {
                let d = row[j + k] - shapelet.values[k];
                sum += d * d;
            }
            if sum < best {
                best = sum;
            }
        }
        out.push(best);
    }
    Ok(out)
}

/// Percentile of the length-normalised distance over every ordered pair
/// of equal-length segments (self-pairs included), for each length in
/// `lengths`. Same rank formula as the sampled estimate.
pub fn exact_threshold(
    dataset: &TimeSeriesDataset,
    percentile: u8,
    lengths: &[usize],
) -> Result<PruningThreshold> {
    let n = dataset.n_series();
    let m = dataset.series_len();
    if lengths.is_empty() || lengths.iter().any(|&l| l == 0 || l > m) {
        return Err(Error::config("every length must lie in [1, M]"));
    }
    if percentile > 100 {
        return Err(Error::config("p must be in [0,100]"));
    }
    let pairs: u128 = lengths
        .iter()
        .map(|&l| {
            let segments = (n * (m - l + 1)) as u128;
            segments * segments
        })
        .sum();
    if pairs > EXACT_THRESHOLD_PAIR_LIMIT {
        return Err(Error::EnumerationTooLarge {
            pairs,
            limit: EXACT_THRESHOLD_PAIR_LIMIT,
        });
    }
    if percentile == 0 {
        return Ok(PruningThreshold::Disabled);
    }

    let mut all = Vec::with_capacity(pairs as usize);
    for &l in lengths {
        let segments: Vec<&[f64]> = (0..n)
            .flat_map(|i| (0..=(m - l)).map(move |j| &dataset.row(i)[j..j + l]))
            .collect();
        for a in &segments {
            for b in &segments {
                let mut sum = 0.0;
                for k in 0..l {
                    sum += (a[k] - b[k]).powi(2);
                }
                all.push(sum / l as f64);
            }
        }
    }
    all.sort_by(f64::total_cmp);
    let rank = (percentile as u128 * pairs).div_ceil(100).max(1) as usize;
    Ok(PruningThreshold::Radius(all[rank - 1]))
}

/// Pairwise state computed in one pass from a list of feature vectors.
pub fn batch_pairwise(n: usize, features: &[Vec<f64>]) -> Result<PairwiseState> {
    if let Some(bad) = features.iter().find(|d| d.len() != n) {
        return Err(Error::LengthMismatch {
            expected: n,
            found: bad.len(),
        });
    }
    let mut dense = vec![vec![0.0; n]; n];
    for i in 0..n {
        for m in i + 1..n {
            let x: f64 = features.iter().map(|d| (d[i] - d[m]).powi(2)).sum();
            dense[i][m] = x;
            dense[m][i] = x;
        }
    }
    PairwiseState::from_dense(&dense, features.len())
}

/// Two-class synthetic data that a single shapelet separates.
///
/// Each series is i.i.d. Gaussian noise with standard deviation `sigma` plus
/// a half-sine bump of length `M/8` placed at a uniformly random offset.
/// Class 1 carries the bump, class 2 its negation. The bump peaks at
/// `10·sigma` (or 10 when `sigma` is 0). Rows are grouped by class, class 1
/// first. Per series the generator yields the offset, then the `M` noise
/// draws.
pub fn generate_synthetic(
    n_per_class: usize,
    series_len: usize,
    sigma: f64,
    seed: u64,
) -> Result<TimeSeriesDataset> {
    if series_len < 16 {
        return Err(Error::config(format!(
            "synthetic series length must be at least 16, got {series_len}"
        )));
    }
    if n_per_class < 2 {
        return Err(Error::config(format!(
            "need at least 2 series per class, got {n_per_class}"
        )));
    }
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::config(format!(
            "noise sigma {sigma} must be finite and ≥ 0"
        )));
    }

    let pattern_len = series_len / 8;
    let amplitude = if sigma > 0.0 { 10.0 * sigma } else { 10.0 };
    let pattern: Vec<f64> = (0..pattern_len)
        .map(|k| amplitude * (std::f64::consts::PI * (k as f64 + 0.5) / pattern_len as f64).sin())
        .collect();

    let mut rng = Rng::new(seed);
    let mut rows = Vec::with_capacity(2 * n_per_class);
    let mut labels = Vec::with_capacity(2 * n_per_class);
    for (label, sign) in [(1, 1.0), (2, -1.0)] {
        for _ in 0..n_per_class {
            let offset = rng.index(series_len - pattern_len + 1);
            let mut row: Vec<f64> = (0..series_len)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    sigma * z
                })
                .collect();
            for (k, p) in pattern.iter().enumerate() {
                row[offset + k] += sign * p;
            }
            rows.push(row);
            labels.push(label);
        }
    }
    TimeSeriesDataset::new(rows, labels)
}
