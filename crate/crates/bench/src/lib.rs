//! Fixtures shared by the kernel benchmarks.

use shapelet_core::testkit::generate_synthetic;
use shapelet_core::{Shapelet, TimeSeriesDataset};

/// Synthetic two-class dataset with `2·n_per_class` series of length `m`.
pub fn dataset(n_per_class: usize, m: usize) -> TimeSeriesDataset {
    generate_synthetic(n_per_class, m, 0.5, 42).expect("valid synthetic sizes")
}

/// Subsequence of series 0 starting at 0.
pub fn shapelet(dataset: &TimeSeriesDataset, len: usize) -> Shapelet {
    Shapelet::from_dataset(dataset, 0, 0, len).expect("length fits")
}

/// `count` shapelets of length `len` taken from consecutive series.
pub fn pool(dataset: &TimeSeriesDataset, len: usize, count: usize) -> Vec<Shapelet> {
    (0..count)
        .map(|k| {
            let series = k % dataset.n_series();
            let start = k / dataset.n_series() % (dataset.series_len() - len + 1);
            Shapelet::from_dataset(dataset, series, start, len).expect("length fits")
        })
        .collect()
}
