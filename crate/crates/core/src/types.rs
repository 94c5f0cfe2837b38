//! Domain model shared across the crate.
//!
//! All values are `f64`. Types are immutable once built and can be shared
//! read-only between threads.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default shapelet length fractions, relative to the compressed series length.
pub const DEFAULT_LENGTH_FRACTIONS: [f64; 3] = [0.2, 0.4, 0.6];

/// Checks the structural invariants of a labelled dataset: at least two
/// series of at least two points, rectangular, finite, one label per row.
///
/// The class-count requirement is separate, see
/// [`TimeSeriesDataset::ensure_supervised`].
pub fn validate_dataset(rows: &[Vec<f64>], labels: &[i64]) -> Result<()> {
    if rows.len() < 2 {
        return Err(Error::TooFewSeries(rows.len()));
    }
    let expected = rows[0].len();
    if expected < 2 {
        return Err(Error::SeriesTooShort(expected));
    }
    for (row, values) in rows.iter().enumerate() {
        if values.len() != expected {
            return Err(Error::RaggedRow {
                row,
                expected,
                found: values.len(),
            });
        }
        if let Some(column) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row, column });
        }
    }
    if labels.len() != rows.len() {
        return Err(Error::LabelCount {
            labels: labels.len(),
            series: rows.len(),
        });
    }
    Ok(())
}

/// `N` labelled series of uniform length `M`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesDataset {
    values: Vec<f64>,
    labels: Vec<i64>,
    n_series: usize,
    series_len: usize,
}

impl TimeSeriesDataset {
    pub fn new(rows: Vec<Vec<f64>>, labels: Vec<i64>) -> Result<Self> {
        validate_dataset(&rows, &labels)?;
        let n_series = rows.len();
        let series_len = rows[0].len();
        let values = rows.into_iter().flatten().collect();
        Ok(Self {
            values,
            labels,
            n_series,
            series_len,
        })
    }

    /// Builds from a flat row-major buffer. Invariants are re-checked.
    pub fn from_flat(values: Vec<f64>, series_len: usize, labels: Vec<i64>) -> Result<Self> {
        if series_len == 0 || values.len() % series_len != 0 {
            return Err(Error::LengthMismatch {
                expected: labels.len() * series_len,
                found: values.len(),
            });
        }
        let rows = values.chunks(series_len).map(<[f64]>::to_vec).collect();
        Self::new(rows, labels)
    }

    pub fn n_series(&self) -> usize {
        self.n_series
    }

    pub fn series_len(&self) -> usize {
        self.series_len
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let start = i * self.series_len;
        &self.values[start..start + self.series_len]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.series_len)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    /// Sorted distinct labels.
    pub fn classes(&self) -> Vec<i64> {
        let mut classes = self.labels.clone();
        classes.sort_unstable();
        classes.dedup();
        classes
    }

    pub fn ensure_supervised(&self) -> Result<()> {
        let count = self.classes().len();
        if count < 2 {
            return Err(Error::SingleClass(count));
        }
        Ok(())
    }
}

/// A candidate or accepted subsequence together with where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Shapelet {
    pub values: Vec<f64>,
    pub origin_series: usize,
    pub origin_start: usize,
}

impl Shapelet {
    /// Copies `dataset.row(series)[start..start + length]`.
    pub fn from_dataset(
        dataset: &TimeSeriesDataset,
        series: usize,
        start: usize,
        length: usize,
    ) -> Result<Self> {
        let m = dataset.series_len();
        if length == 0 || length > m || start > m - length {
            return Err(Error::ShapeletLength {
                length: start.saturating_add(length),
                series_len: m,
            });
        }
        if series >= dataset.n_series() {
            return Err(Error::LengthMismatch {
                expected: dataset.n_series(),
                found: series,
            });
        }
        Ok(Self {
            values: dataset.row(series)[start..start + length].to_vec(),
            origin_series: series,
            origin_start: start,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Exact PAA compression ratio `num / den` in `(0, 1]`.
///
/// Kept rational so window bounds are computed in integer arithmetic
/// (ratios like 1/3 are not representable as `f64`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PaaRatio {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl PaaRatio {
    pub const ONE: PaaRatio = PaaRatio { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 || num > den {
            return Err(Error::config(format!(
                "PAA ratio {num}/{den} must lie in (0, 1]"
            )));
        }
        let g = gcd(num, den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub fn numerator(self) -> u64 {
        self.num
    }

    pub fn denominator(self) -> u64 {
        self.den
    }

    pub fn is_identity(self) -> bool {
        self.num == self.den
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `⌈len · r⌉`
    pub fn compressed_len(self, len: usize) -> usize {
        let len = len as u128;
        ((len * self.num as u128).div_ceil(self.den as u128)) as usize
    }
}

impl Default for PaaRatio {
    fn default() -> Self {
        Self::ONE
    }
}

impl fmt::Display for PaaRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for PaaRatio {
    type Err = Error;

    /// Accepts `"1"`, `"0.125"` or `"1/8"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::config(format!("cannot parse PAA ratio {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            let n = n.trim().parse::<u64>().map_err(|_| bad())?;
            let d = d.trim().parse::<u64>().map_err(|_| bad())?;
            return Self::new(n, d);
        }
        let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
        if int_part.is_empty() && frac_part.is_empty()
            || frac_part.len() > 18
            || !int_part.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(bad());
        }
        let den = 10u64.pow(frac_part.len() as u32);
        let int_value: u64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let frac_value: u64 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().map_err(|_| bad())?
        };
        let num = int_value
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac_value))
            .ok_or_else(bad)?;
        Self::new(num, den)
    }
}

/// How candidate-vs-pool distances are scaled before comparing with ε.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LookupNorm {
    /// `(1/m)·‖s − q‖² < ε`, on the same scale the threshold is estimated on.
    #[default]
    Normalized,
    /// `‖s − q‖² < ε`, the raw squared distance.
    Unnormalized,
}

/// Similarity radius used to refuse candidates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PruningThreshold {
    /// Percentile 0: nothing is ever refused.
    Disabled,
    Radius(f64),
}

impl PruningThreshold {
    pub fn radius(self) -> Option<f64> {
        match self {
            PruningThreshold::Disabled => None,
            PruningThreshold::Radius(eps) => Some(eps),
        }
    }
}

impl fmt::Display for PruningThreshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PruningThreshold::Disabled => f.write_str("off"),
            PruningThreshold::Radius(eps) => write!(f, "{eps}"),
        }
    }
}

/// Parameters of one discovery run.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscoveryConfig {
    pub paa_ratio: PaaRatio,
    /// Threshold percentile in `[0, 100]`; 0 disables pruning.
    pub percentile: u8,
    /// Shapelet lengths as fractions of the compressed series length.
    pub length_fractions: Vec<f64>,
    pub seed: u64,
    /// Number of sampled candidates; `None` means `N·M'·L`.
    pub candidate_budget: Option<u64>,
    pub lookup: LookupNorm,
}

impl Default for DiscoveryConfig {
    fn default() -> Self {
        Self {
            paa_ratio: PaaRatio::ONE,
            percentile: 25,
            length_fractions: DEFAULT_LENGTH_FRACTIONS.to_vec(),
            seed: 0,
            candidate_budget: None,
            lookup: LookupNorm::Normalized,
        }
    }
}

impl DiscoveryConfig {
    pub fn validate(&self) -> Result<()> {
        if self.percentile > 100 {
            return Err(Error::config("p must be in [0,100]"));
        }
        if self.length_fractions.is_empty() {
            return Err(Error::config(
                "at least one shapelet length fraction is required",
            ));
        }
        if let Some(f) = self
            .length_fractions
            .iter()
            .find(|f| !(f.is_finite() && **f > 0.0 && **f <= 1.0))
        {
            return Err(Error::config(format!(
                "shapelet length fraction {f} must lie in (0, 1]"
            )));
        }
        if self.candidate_budget == Some(0) {
            return Err(Error::config("candidate budget must be positive"));
        }
        Ok(())
    }

    /// Concrete lengths `max(1, round(fraction · M'))` for a compressed length `M'`.
    pub fn shapelet_lengths(&self, compressed_len: usize) -> Result<Vec<usize>> {
        self.validate()?;
        self.length_fractions
            .iter()
            .map(|f| {
                let len = ((f * compressed_len as f64).round() as usize).max(1);
                if len > compressed_len {
                    Err(Error::ShapeletLength {
                        length: len,
                        series_len: compressed_len,
                    })
                } else {
                    Ok(len)
                }
            })
            .collect()
    }
}

/// Outcome of one discovery run.
///
/// `accepted`, `transform` and `accuracy_trace` are parallel: entry `k` of
/// each belongs to the `k`-th accepted shapelet. Shapelet values live in the
/// PAA-compressed space of `config.paa_ratio`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscoveryResult {
    pub config: DiscoveryConfig,
    pub compressed_len: usize,
    pub shapelet_lengths: Vec<usize>,
    pub threshold: PruningThreshold,
    pub accepted: Vec<Shapelet>,
    pub sampled_count: u64,
    pub considered_count: u64,
    pub refused_count: u64,
    pub rejected_count: u64,
    /// Sliding-window alignments scanned by the minimum-distance kernel.
    pub window_evaluations: u64,
    pub transform: Vec<Vec<f64>>,
    pub accuracy_trace: Vec<f64>,
}

impl DiscoveryResult {
    pub fn accepted_count(&self) -> u64 {
        self.accepted.len() as u64
    }

    pub fn train_accuracy(&self) -> f64 {
        self.accuracy_trace.last().copied().unwrap_or(0.0)
    }

    fn fraction(part: u64, whole: u64) -> f64 {
        if whole == 0 {
            0.0
        } else {
            part as f64 / whole as f64
        }
    }

    pub fn refused_fraction(&self) -> f64 {
        Self::fraction(self.refused_count, self.sampled_count)
    }

    /// `f`: share of sampled candidates that were evaluated.
    pub fn considered_fraction(&self) -> f64 {
        Self::fraction(self.considered_count, self.sampled_count)
    }

    /// Checks the counter identities and the parallel-array shapes.
    pub fn check_consistency(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Document(msg));
        if self.sampled_count != self.considered_count + self.refused_count {
            return fail(format!(
                "sampled {} != considered {} + refused {}",
                self.sampled_count, self.considered_count, self.refused_count
            ));
        }
        if self.considered_count != self.accepted_count() + self.rejected_count {
            return fail(format!(
                "considered {} != accepted {} + rejected {}",
                self.considered_count,
                self.accepted_count(),
                self.rejected_count
            ));
        }
        if self.transform.len() != self.accepted.len()
            || self.accuracy_trace.len() != self.accepted.len()
        {
            return fail("accepted, transform and accuracy trace differ in length".into());
        }
        if self.accuracy_trace.windows(2).any(|w| w[1] <= w[0]) {
            return fail("accuracy trace is not strictly increasing".into());
        }
        Ok(())
    }
}
