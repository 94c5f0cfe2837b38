//! Piecewise Aggregate Approximation.
//!
//! Output point `j` (1-based) of a series of length `M` compressed by
//! `r = a/b` is the mean of input points `⌈(j−1)/r⌉+1 ..= min(⌈j/r⌉, M)`.
//! When `1/r` does not divide `M` the last window is partial and is averaged
//! over the points it actually covers. For non-integer `1/r` a trailing
//! window can start past `M`; it is clamped to the last point so the output
//! always has exactly `⌈M·r⌉` points.

use crate::error::{Error, Result};
use crate::types::{PaaRatio, TimeSeriesDataset};

/// Half-open 0-based input range feeding output point `j` (0-based).
fn window(j: usize, len: usize, ratio: PaaRatio) -> (usize, usize) {
    let (a, b) = (ratio.numerator() as u128, ratio.denominator() as u128);
    // ⌈j·b/a⌉ and ⌈(j+1)·b/a⌉ in exact integer arithmetic.
    let lo = ((j as u128 * b).div_ceil(a)) as usize;
    let hi = (((j as u128 + 1) * b).div_ceil(a)) as usize;
    let hi = hi.min(len);
    let lo = lo.min(len - 1);
    (lo, hi)
}

/// Compresses one series. `ratio` must leave at least one output point.
pub fn paa_series(series: &[f64], ratio: PaaRatio) -> Vec<f64> {
    if ratio.is_identity() {
        return series.to_vec();
    }
    let out_len = ratio.compressed_len(series.len());
    (0..out_len)
        .map(|j| {
            let (lo, hi) = window(j, series.len(), ratio);
            let window = &series[lo..hi];
            window.iter().sum::<f64>() / window.len() as f64
        })
        .collect()
}

/// Compresses every series of `dataset` by `ratio`; labels are kept.
pub fn paa_compress(dataset: &TimeSeriesDataset, ratio: PaaRatio) -> Result<TimeSeriesDataset> {
    let out_len = ratio.compressed_len(dataset.series_len());
    if out_len < 2 {
        return Err(Error::config(format!(
            "PAA ratio {ratio} compresses length {} to {out_len} < 2",
            dataset.series_len()
        )));
    }
    if ratio.is_identity() {
        return Ok(dataset.clone());
    }
    let values: Vec<f64> = dataset
        .rows()
        .flat_map(|row| paa_series(row, ratio))
        .collect();
    TimeSeriesDataset::from_flat(values, out_len, dataset.labels().to_vec())
}
