//! The discovery loop: sample a candidate, refuse it if an equal-length
//! candidate within ε was already considered, otherwise evaluate it and keep
//! it only if it strictly improves leave-one-out 1-NN train accuracy.
//!
//! Per iteration the generator is consumed in the order series, length
//! index, start. The threshold sample is drawn first from the same stream.

use std::time::{Duration, Instant};

use crate::distance::{min_dist_all_values, similarity_limit, within_limit};
use crate::error::Result;
use crate::nn::PairwiseState;
use crate::paa::paa_compress;
use crate::sampling::{estimate_threshold, Rng};
use crate::types::{DiscoveryConfig, DiscoveryResult, Shapelet, TimeSeriesDataset};

/// A sampled subsequence of the compressed training data.
#[derive(Debug, Clone, Copy)]
pub struct Candidate<'a> {
    pub series: usize,
    pub start: usize,
    pub values: &'a [f64],
}

/// Hooks into the loop, mainly for tests and tracing. All methods default
/// to no-ops.
pub trait DiscoveryObserver {
    fn refused(&mut self, _candidate: &Candidate<'_>) {}

    /// Called with the candidate's distance vector right before it is added
    /// to the pairwise state.
    fn evaluated(&mut self, _candidate: &Candidate<'_>, _distances: &[f64]) {}

    fn accepted(&mut self, _candidate: &Candidate<'_>, _accuracy: f64, _state: &PairwiseState) {}

    /// Called after the candidate's contribution has been rolled back.
    fn rejected(&mut self, _candidate: &Candidate<'_>, _accuracy: f64, _state: &PairwiseState) {}
}

impl DiscoveryObserver for () {}

/// Wall-clock time spent in each stage of a run.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DiscoveryTimings {
    pub compression: Duration,
    pub threshold: Duration,
    pub search: Duration,
}

impl DiscoveryTimings {
    pub fn total(&self) -> Duration {
        self.compression + self.threshold + self.search
    }
}

/// Considered candidates bucketed by length index, stored flat.
struct ConsideredPool {
    accepted: Vec<Vec<f64>>,
    rejected: Vec<Vec<f64>>,
}

impl ConsideredPool {
    fn new(lengths: usize) -> Self {
        Self {
            accepted: vec![Vec::new(); lengths],
            rejected: vec![Vec::new(); lengths],
        }
    }

    fn any_within(bucket: &[f64], candidate: &[f64], limit: f64) -> bool {
        bucket
            .chunks_exact(candidate.len())
            .any(|q| within_limit(candidate, q, limit))
    }

    /// Accepted shapelets are searched before rejected ones.
    fn is_similar(&self, length_idx: usize, candidate: &[f64], limit: Option<f64>) -> bool {
        let Some(limit) = limit else {
            return false;
        };
        Self::any_within(&self.accepted[length_idx], candidate, limit)
            || Self::any_within(&self.rejected[length_idx], candidate, limit)
    }
}

/// Runs discovery with default (no-op) observation.
pub fn discover(dataset: &TimeSeriesDataset, config: &DiscoveryConfig) -> Result<DiscoveryResult> {
    discover_with(dataset, config, &mut ()).map(|(result, _)| result)
}

pub fn discover_with<O: DiscoveryObserver + ?Sized>(
    dataset: &TimeSeriesDataset,
    config: &DiscoveryConfig,
    observer: &mut O,
) -> Result<(DiscoveryResult, DiscoveryTimings)> {
    config.validate()?;
    dataset.ensure_supervised()?;

    let mut timings = DiscoveryTimings::default();
    let started = Instant::now();
    let data = paa_compress(dataset, config.paa_ratio)?;
    timings.compression = started.elapsed();

    let n = data.n_series();
    let m = data.series_len();
    let lengths = config.shapelet_lengths(m)?;
    let labels = data.labels();

    let mut rng = Rng::new(config.seed);
    let started = Instant::now();
    let threshold = estimate_threshold(&data, config.percentile, &lengths, &mut rng)?;
    timings.threshold = started.elapsed();

    let budget = config
        .candidate_budget
        .unwrap_or((n * m * lengths.len()) as u64);
    let limits: Vec<Option<f64>> = lengths
        .iter()
        .map(|&len| similarity_limit(threshold, config.lookup, len))
        .collect();

    let started = Instant::now();
    let mut pool = ConsideredPool::new(lengths.len());
    let mut state = PairwiseState::new(n);
    let mut accepted = Vec::new();
    let mut transform = Vec::new();
    let mut accuracy_trace = Vec::new();
    let mut prev_accuracy = f64::NEG_INFINITY;
    let mut refused = 0u64;
    let mut rejected = 0u64;
    let mut windows = 0u64;

    for _ in 0..budget {
        let series = rng.index(n);
        let length_idx = rng.index(lengths.len());
        let len = lengths[length_idx];
        let start = rng.index(m - len + 1);
        let values = &data.row(series)[start..start + len];
        let candidate = Candidate {
            series,
            start,
            values,
        };

        if pool.is_similar(length_idx, values, limits[length_idx]) {
            refused += 1;
            observer.refused(&candidate);
            continue;
        }

        let distances = min_dist_all_values(values, &data)?;
        windows += (n * (m - len + 1)) as u64;
        observer.evaluated(&candidate, &distances);
        state.add_feature(&distances)?;
        let accuracy = state.loocv_accuracy(labels)?;

        if accuracy > prev_accuracy {
            prev_accuracy = accuracy;
            pool.accepted[length_idx].extend_from_slice(values);
            accepted.push(Shapelet {
                values: values.to_vec(),
                origin_series: series,
                origin_start: start,
            });
            transform.push(distances);
            accuracy_trace.push(accuracy);
            observer.accepted(&candidate, accuracy, &state);
        } else {
            state.remove_feature(&distances)?;
            pool.rejected[length_idx].extend_from_slice(values);
            rejected += 1;
            observer.rejected(&candidate, accuracy, &state);
        }
    }
    timings.search = started.elapsed();

    let considered = accepted.len() as u64 + rejected;
    let result = DiscoveryResult {
        config: config.clone(),
        compressed_len: m,
        shapelet_lengths: lengths,
        threshold,
        accepted,
        sampled_count: budget,
        considered_count: considered,
        refused_count: refused,
        rejected_count: rejected,
        window_evaluations: windows,
        transform,
        accuracy_trace,
    };
    debug_assert!(result.check_consistency().is_ok());
    Ok((result, timings))
}
