//! Train/test evaluation in shapelet-transformed space, `(r, p)` grid
//! search and the pruning/PAA ablation.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::discovery::{discover_with, DiscoveryTimings};
use crate::distance::min_dist_all;
use crate::error::{Error, Result};
use crate::paa::paa_compress;
use crate::types::{DiscoveryConfig, DiscoveryResult, PaaRatio, Shapelet, TimeSeriesDataset};

/// Compresses `dataset` by `ratio`, then row `k` holds the minimum distances
/// of every series to `shapelets[k]`.
pub fn transform(
    dataset: &TimeSeriesDataset,
    shapelets: &[Shapelet],
    ratio: PaaRatio,
) -> Result<Vec<Vec<f64>>> {
    let compressed = paa_compress(dataset, ratio)?;
    shapelets
        .iter()
        .map(|s| min_dist_all(s, &compressed))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub predictions: Vec<i64>,
    pub accuracy: f64,
}

fn column_count(features: &[Vec<f64>], what: &str) -> Result<usize> {
    let cols = features.first().map_or(0, Vec::len);
    if features.iter().any(|row| row.len() != cols) {
        return Err(Error::config(format!(
            "{what} feature rows differ in length"
        )));
    }
    Ok(cols)
}

/// 1-NN over feature columns with squared Euclidean distance; ties go to
/// the smallest training index.
pub fn classify_1nn(
    train_features: &[Vec<f64>],
    train_labels: &[i64],
    test_features: &[Vec<f64>],
    test_labels: &[i64],
) -> Result<Classification> {
    let k = train_features.len();
    if k == 0 {
        return Err(Error::config("at least one feature is required"));
    }
    if test_features.len() != k {
        return Err(Error::LengthMismatch {
            expected: k,
            found: test_features.len(),
        });
    }
    let n_train = column_count(train_features, "training")?;
    let n_test = column_count(test_features, "test")?;
    if n_train == 0 || train_labels.len() != n_train {
        return Err(Error::LengthMismatch {
            expected: n_train,
            found: train_labels.len(),
        });
    }
    if test_labels.len() != n_test {
        return Err(Error::LengthMismatch {
            expected: n_test,
            found: test_labels.len(),
        });
    }

    let predictions: Vec<i64> = (0..n_test)
        .map(|t| {
            let dist = |c: usize| -> f64 {
                (0..k)
                    .map(|f| {
                        let diff = train_features[f][c] - test_features[f][t];
                        diff * diff
                    })
                    .sum()
            };
            let mut best = 0;
            let mut best_dist = dist(0);
            for c in 1..n_train {
                let d = dist(c);
                if d < best_dist {
                    best = c;
                    best_dist = d;
                }
            }
            train_labels[best]
        })
        .collect();
    let correct = predictions
        .iter()
        .zip(test_labels)
        .filter(|(p, y)| p == y)
        .count();
    let accuracy = if n_test == 0 {
        0.0
    } else {
        correct as f64 / n_test as f64
    };
    Ok(Classification {
        predictions,
        accuracy,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StageTimings {
    pub discovery: DiscoveryTimings,
    /// Test-set transform plus classification.
    pub transform: Duration,
}

impl StageTimings {
    pub fn total(&self) -> Duration {
        self.discovery.total() + self.transform
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub result: DiscoveryResult,
    pub train_accuracy: f64,
    pub test_accuracy: f64,
    pub predictions: Vec<i64>,
    pub timings: StageTimings,
}

fn check_compatible(train: &TimeSeriesDataset, test: &TimeSeriesDataset) -> Result<()> {
    if train.series_len() != test.series_len() {
        return Err(Error::LengthMismatch {
            expected: train.series_len(),
            found: test.series_len(),
        });
    }
    let known: BTreeSet<i64> = train.labels().iter().copied().collect();
    if let Some(unknown) = test.labels().iter().find(|l| !known.contains(l)) {
        return Err(Error::config(format!(
            "test label {unknown} does not occur in the training set"
        )));
    }
    Ok(())
}

/// Classifies `test` with the shapelets of an existing discovery run on
/// `train`.
pub fn evaluate_result(
    train: &TimeSeriesDataset,
    test: &TimeSeriesDataset,
    result: DiscoveryResult,
    discovery: DiscoveryTimings,
) -> Result<EvaluationReport> {
    check_compatible(train, test)?;
    let started = Instant::now();
    let test_features = transform(test, &result.accepted, result.config.paa_ratio)?;
    let classification = classify_1nn(
        &result.transform,
        train.labels(),
        &test_features,
        test.labels(),
    )?;
    let timings = StageTimings {
        discovery,
        transform: started.elapsed(),
    };
    Ok(EvaluationReport {
        train_accuracy: result.train_accuracy(),
        test_accuracy: classification.accuracy,
        predictions: classification.predictions,
        result,
        timings,
    })
}

/// Discovers shapelets on `train` and reports train and test accuracy.
pub fn evaluate(
    train: &TimeSeriesDataset,
    test: &TimeSeriesDataset,
    config: &DiscoveryConfig,
) -> Result<EvaluationReport> {
    check_compatible(train, test)?;
    let (result, timings) = discover_with(train, config, &mut ())?;
    evaluate_result(train, test, result, timings)
}

/// Which of `r` and `p` decides first between equally accurate cells.
/// The larger value wins in both cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieOrder {
    #[default]
    RatioFirst,
    PercentileFirst,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSearch {
    pub ratios: Vec<PaaRatio>,
    pub percentiles: Vec<u8>,
    /// Train accuracy of a cell is averaged over these seeds.
    pub seeds: Vec<u64>,
    pub tie_order: TieOrder,
    /// Worker threads for running cells; results do not depend on it.
    pub threads: usize,
}

impl GridSearch {
    pub fn default_ratios() -> Vec<PaaRatio> {
        [(1, 1), (1, 2), (1, 4), (1, 8)]
            .into_iter()
            .map(|(a, b)| PaaRatio::new(a, b).expect("valid ratio"))
            .collect()
    }

    pub fn new(seed: u64) -> Self {
        Self {
            ratios: Self::default_ratios(),
            percentiles: vec![15, 25, 35],
            seeds: vec![seed],
            tie_order: TieOrder::RatioFirst,
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridCell {
    pub ratio: PaaRatio,
    pub percentile: u8,
    /// Mean final train accuracy over the grid's seeds.
    pub train_accuracy: f64,
    /// One run per seed, in seed order.
    pub runs: Vec<(DiscoveryResult, DiscoveryTimings)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridOutcome {
    pub cells: Vec<GridCell>,
    pub best: usize,
}

impl GridOutcome {
    pub fn best_cell(&self) -> &GridCell {
        &self.cells[self.best]
    }
}

/// Runs discovery for every `(r, p)` cell (ratios outer, percentiles inner)
/// and picks the most accurate on train.
pub fn grid_search(
    train: &TimeSeriesDataset,
    base: &DiscoveryConfig,
    grid: &GridSearch,
) -> Result<GridOutcome> {
    if grid.ratios.is_empty() || grid.percentiles.is_empty() || grid.seeds.is_empty() {
        return Err(Error::config(
            "grid ratios, percentiles and seeds must be non-empty",
        ));
    }
    let settings: Vec<(PaaRatio, u8)> = grid
        .ratios
        .iter()
        .flat_map(|&r| grid.percentiles.iter().map(move |&p| (r, p)))
        .collect();

    let run_cell = |&(ratio, percentile): &(PaaRatio, u8)| -> Result<GridCell> {
        let runs = grid
            .seeds
            .iter()
            .map(|&seed| {
                let config = DiscoveryConfig {
                    paa_ratio: ratio,
                    percentile,
                    seed,
                    ..base.clone()
                };
                discover_with(train, &config, &mut ())
            })
            .collect::<Result<Vec<_>>>()?;
        let train_accuracy =
            runs.iter().map(|(r, _)| r.train_accuracy()).sum::<f64>() / runs.len() as f64;
        Ok(GridCell {
            ratio,
            percentile,
            train_accuracy,
            runs,
        })
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(grid.threads.max(1))
        .build()
        .map_err(|e| Error::config(e.to_string()))?;
    let cells = pool.install(|| {
        settings
            .par_iter()
            .map(run_cell)
            .collect::<Result<Vec<_>>>()
    })?;

    let key = |c: &GridCell| {
        let r = (c.ratio.numerator() as u128 * 1_000_000_000) / c.ratio.denominator() as u128;
        match grid.tie_order {
            TieOrder::RatioFirst => (r, c.percentile as u128),
            TieOrder::PercentileFirst => (c.percentile as u128, r),
        }
    };
    let mut best = 0;
    for (i, cell) in cells.iter().enumerate().skip(1) {
        let current = &cells[best];
        if cell.train_accuracy > current.train_accuracy
            || (cell.train_accuracy == current.train_accuracy && key(cell) > key(current))
        {
            best = i;
        }
    }
    Ok(GridOutcome { cells, best })
}

/// The four configurations of the pruning/PAA ablation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// `r = 1`, `p = 0`: every sampled candidate is evaluated.
    Exhaustive,
    PaaOnly,
    PruningOnly,
    Full,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Exhaustive,
        Variant::PaaOnly,
        Variant::PruningOnly,
        Variant::Full,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Exhaustive => "neither",
            Variant::PaaOnly => "paa",
            Variant::PruningOnly => "prune",
            Variant::Full => "paa+prune",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.name() == name)
    }

    pub fn uses_paa(self) -> bool {
        matches!(self, Variant::PaaOnly | Variant::Full)
    }

    pub fn uses_pruning(self) -> bool {
        matches!(self, Variant::PruningOnly | Variant::Full)
    }

    /// `base` with PAA and/or pruning switched off as the variant requires.
    pub fn configure(self, base: &DiscoveryConfig) -> DiscoveryConfig {
        DiscoveryConfig {
            paa_ratio: if self.uses_paa() {
                base.paa_ratio
            } else {
                PaaRatio::ONE
            },
            percentile: if self.uses_pruning() {
                base.percentile
            } else {
                0
            },
            ..base.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AblationRow {
    pub variant: Variant,
    pub report: EvaluationReport,
}

/// Evaluates each variant with the same seed and base settings.
pub fn ablation(
    train: &TimeSeriesDataset,
    test: &TimeSeriesDataset,
    base: &DiscoveryConfig,
    variants: &[Variant],
) -> Result<Vec<AblationRow>> {
    variants
        .iter()
        .map(|&variant| {
            Ok(AblationRow {
                variant,
                report: evaluate(train, test, &variant.configure(base))?,
            })
        })
        .collect()
}
