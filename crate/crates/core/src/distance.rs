//! Minimum-distance and similarity-lookup kernels.
//!
//! Distances are raw squared Euclidean (no z-normalisation). The scans
//! abandon a window as soon as its running sum reaches the current best;
//! sums are accumulated in index order so abandoning never changes the
//! result bit for bit.

use crate::error::{Error, Result};
use crate::types::{LookupNorm, PruningThreshold, Shapelet, TimeSeriesDataset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EarlyAbandon {
    #[default]
    On,
    Off,
}

/// Best alignment of a shapelet against one series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alignment {
    pub distance: f64,
    pub position: usize,
}

#[inline]
fn window_sq_distance(window: &[f64], pattern: &[f64], bound: f64) -> f64 {
    let mut sum = 0.0;
    for (x, y) in window.iter().zip(pattern) {
        let d = x - y;
        sum += d * d;
        if sum >= bound {
            return sum;
        }
    }
    sum
}

pub(crate) fn min_dist_slice(pattern: &[f64], series: &[f64], abandon: EarlyAbandon) -> Alignment {
    let mut best = Alignment {
        distance: f64::INFINITY,
        position: 0,
    };
    for (j, window) in series.windows(pattern.len()).enumerate() {
        let bound = match abandon {
            EarlyAbandon::On => best.distance,
            EarlyAbandon::Off => f64::INFINITY,
        };
        let d = window_sq_distance(window, pattern, bound);
        if d < best.distance {
            best = Alignment {
                distance: d,
                position: j,
            };
        }
    }
    best
}

fn check_fits(length: usize, series_len: usize) -> Result<()> {
    if length == 0 || length > series_len {
        return Err(Error::ShapeletLength { length, series_len });
    }
    Ok(())
}

/// `min_j ‖series[j..j+m] − s‖²` and the smallest `j` attaining it.
pub fn min_dist(shapelet: &Shapelet, series: &[f64]) -> Result<Alignment> {
    min_dist_with(shapelet, series, EarlyAbandon::On)
}

pub fn min_dist_with(
    shapelet: &Shapelet,
    series: &[f64],
    abandon: EarlyAbandon,
) -> Result<Alignment> {
    check_fits(shapelet.len(), series.len())?;
    Ok(min_dist_slice(&shapelet.values, series, abandon))
}

/// Minimum distance of `shapelet` to every series of `dataset`.
pub fn min_dist_all(shapelet: &Shapelet, dataset: &TimeSeriesDataset) -> Result<Vec<f64>> {
    min_dist_all_values(&shapelet.values, dataset)
}

pub(crate) fn min_dist_all_values(
    pattern: &[f64],
    dataset: &TimeSeriesDataset,
) -> Result<Vec<f64>> {
    check_fits(pattern.len(), dataset.series_len())?;
    Ok(dataset
        .rows()
        .map(|row| min_dist_slice(pattern, row, EarlyAbandon::On).distance)
        .collect())
}

/// Squared-distance budget below which two length-`len` segments count as
/// similar, or `None` if nothing can be similar.
pub(crate) fn similarity_limit(
    threshold: PruningThreshold,
    norm: LookupNorm,
    len: usize,
) -> Option<f64> {
    let eps = threshold.radius()?;
    Some(match norm {
        LookupNorm::Normalized => eps * len as f64,
        LookupNorm::Unnormalized => eps,
    })
}

/// `‖a − b‖² < limit`, giving up once the running sum reaches `limit`.
#[inline]
pub(crate) fn within_limit(a: &[f64], b: &[f64], limit: f64) -> bool {
    let mut sum = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        sum += d * d;
        if sum >= limit {
            return false;
        }
    }
    true
}

/// True iff some equal-length `q` in `pool` is within ε of `candidate`.
///
/// With [`LookupNorm::Normalized`] the test is `(1/m)·‖s − q‖² < ε`,
/// evaluated as `‖s − q‖² < ε·m`.
pub fn lookup(
    candidate: &[f64],
    pool: &[Shapelet],
    threshold: PruningThreshold,
    norm: LookupNorm,
) -> bool {
    let Some(limit) = similarity_limit(threshold, norm, candidate.len()) else {
        return false;
    };
    pool.iter()
        .filter(|q| q.len() == candidate.len())
        .any(|q| within_limit(candidate, &q.values, limit))
}
