//! Scalable discovery of time-series shapelets.
//!
//! Candidates are sampled at random from (optionally PAA-compressed)
//! training series. A candidate within a percentile-derived distance ε of an
//! already considered candidate of the same length is refused without being
//! evaluated; every other candidate is kept only if it strictly improves the
//! leave-one-out 1-NN accuracy of the shapelet-transformed training set,
//! maintained incrementally in an `N×N` distance matrix.
//!
//! ```
//! use shapelet_core::{discover, testkit, DiscoveryConfig};
//!
//! let train = testkit::generate_synthetic(10, 32, 0.5, 7).unwrap();
//! let result = discover(&train, &DiscoveryConfig { seed: 7, ..Default::default() }).unwrap();
//! assert!(!result.accepted.is_empty());
//! assert_eq!(result.sampled_count, result.considered_count + result.refused_count);
//! ```

pub mod discovery;
pub mod distance;
pub mod error;
pub mod eval;
pub mod io;
pub mod nn;
pub mod paa;
pub mod sampling;
pub mod testkit;
pub mod types;

pub use discovery::{discover, discover_with, Candidate, DiscoveryObserver, DiscoveryTimings};
pub use distance::{lookup, min_dist, min_dist_all, Alignment, EarlyAbandon};
pub use error::{Error, Result};
pub use eval::{
    ablation, classify_1nn, evaluate, grid_search, transform, AblationRow, EvaluationReport,
    GridOutcome, GridSearch, TieOrder, Variant,
};
pub use io::{load_dataset, read_result, write_result, DatasetFileSpec};
pub use nn::PairwiseState;
pub use paa::paa_compress;
pub use sampling::{estimate_threshold, Rng};
pub use types::{
    validate_dataset, DiscoveryConfig, DiscoveryResult, LookupNorm, PaaRatio, PruningThreshold,
    Shapelet, TimeSeriesDataset, DEFAULT_LENGTH_FRACTIONS,
};
