//! Seeded sampling and pruning-threshold estimation.
//!
//! # Generator
//!
//! [`Rng`] is ChaCha with 8 rounds (`rand_chacha::ChaCha8Rng`), seeded with
//! `seed_from_u64(seed)`, which expands the 64-bit seed into the 256-bit key
//! with PCG32 as specified by `rand_core`. Bounded integers use Lemire's
//! widening-multiply method with rejection on the 64-bit output
//! ([`Rng::index`]). Both steps are platform independent, so a seed fully
//! determines every run.
//!
//! # Threshold
//!
//! [`estimate_threshold`] draws `N·M` random equal-length segment pairs.
//! Each pair consumes, in order: a length index, then `(series, start)` of
//! the first segment, then `(series, start)` of the second. The recorded
//! distance is `(1/len)·‖a − b‖²` and the threshold is the value at 1-based
//! rank `⌈p·N·M / 100⌉` of the ascending sample.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::types::{PruningThreshold, TimeSeriesDataset};

#[derive(Debug, Clone)]
pub struct Rng {
    inner: ChaCha8Rng,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform integer in `0..bound`; `bound` must be positive.
    pub fn index(&mut self, bound: usize) -> usize {
        assert!(bound > 0, "empty sampling range");
        let range = bound as u64;
        let mut wide = u128::from(self.inner.next_u64()) * u128::from(range);
        let mut low = wide as u64;
        if low < range {
            let threshold = range.wrapping_neg() % range;
            while low < threshold {
                wide = u128::from(self.inner.next_u64()) * u128::from(range);
                low = wide as u64;
            }
        }
        (wide >> 64) as usize
    }
}

impl RngCore for Rng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// 1-based rank `⌈p·total/100⌉` used by both the sampled and exact thresholds.
pub fn percentile_rank(percentile: u8, total: usize) -> usize {
    (percentile as usize * total).div_ceil(100).max(1)
}

pub(crate) fn check_lengths(lengths: &[usize], series_len: usize) -> Result<()> {
    if lengths.is_empty() {
        return Err(Error::config("shapelet length set is empty"));
    }
    if let Some(&bad) = lengths.iter().find(|&&l| l == 0 || l > series_len) {
        return Err(Error::ShapeletLength {
            length: bad,
            series_len,
        });
    }
    Ok(())
}

/// Length-normalised squared distance between two equal-length segments.
pub(crate) fn normalized_sq_distance(a: &[f64], b: &[f64]) -> f64 {
    let sum: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    sum / a.len() as f64
}

/// Estimates the pruning radius ε from `N·M` random segment pairs.
///
/// Percentile 0 still consumes the draws (so runs that differ only in `p`
/// see the same candidate stream afterwards) and returns
/// [`PruningThreshold::Disabled`].
pub fn estimate_threshold(
    dataset: &TimeSeriesDataset,
    percentile: u8,
    lengths: &[usize],
    rng: &mut Rng,
) -> Result<PruningThreshold> {
    if percentile > 100 {
        return Err(Error::config("p must be in [0,100]"));
    }
    let m = dataset.series_len();
    check_lengths(lengths, m)?;
    let n = dataset.n_series();
    let total = n * m;

    let mut sample = Vec::with_capacity(total);
    for _ in 0..total {
        let len = lengths[rng.index(lengths.len())];
        let starts = m - len + 1;
        let (i, j) = (rng.index(n), rng.index(starts));
        let (k, l) = (rng.index(n), rng.index(starts));
        sample.push(normalized_sq_distance(
            &dataset.row(i)[j..j + len],
            &dataset.row(k)[l..l + len],
        ));
    }

    if percentile == 0 {
        return Ok(PruningThreshold::Disabled);
    }
    let rank = percentile_rank(percentile, total);
    let (_, eps, _) = sample.select_nth_unstable_by(rank - 1, f64::total_cmp);
    Ok(PruningThreshold::Radius(*eps))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp_dataset() -> TimeSeriesDataset {
        TimeSeriesDataset::new(
            vec![
                vec![0.0, 1.0, 2.0, 3.0, 4.0],
                vec![4.0, 3.0, 2.0, 1.0, 0.0],
                vec![1.0, 1.0, 0.0, 0.0, 1.0],
            ],
            vec![0, 1, 0],
        )
        .unwrap()
    }

    #[test]
    fn index_stays_in_bounds_and_is_reproducible() {
        let mut a = Rng::new(42);
        let mut b = Rng::new(42);
        for bound in 1..200 {
            let x = a.index(bound);
            assert!(x < bound);
            assert_eq!(x, b.index(bound));
        }
    }

    #[test]
    fn generator_stream_is_pinned() {
        // Guards the documented seeding procedure against dependency drift.
        let mut rng = Rng::new(7);
        let draws: Vec<usize> = (0..8).map(|_| rng.index(1000)).collect();
        let mut again = Rng::new(7);
        assert_eq!(draws, (0..8).map(|_| again.index(1000)).collect::<Vec<_>>());
        assert_eq!(draws, PINNED_SEED7_DRAWS);
    }

    const PINNED_SEED7_DRAWS: [usize; 8] = [157, 167, 704, 726, 601, 359, 83, 849];

    #[test]
    fn rank_formula() {
        assert_eq!(percentile_rank(25, 10), 3);
        assert_eq!(percentile_rank(100, 10), 10);
        assert_eq!(percentile_rank(1, 10), 1);
        assert_eq!(percentile_rank(50, 8), 4);
    }

    #[test]
    fn p100_is_sample_maximum() {
        let ds = ramp_dataset();
        let eps = estimate_threshold(&ds, 100, &[2, 3], &mut Rng::new(3)).unwrap();
        // Maximum from replaying the same draw sequence.
        let mut rng = Rng::new(3);
        let mut max = f64::MIN;
        for _ in 0..15 {
            let len = [2, 3][rng.index(2)];
            let (i, j) = (rng.index(3), rng.index(5 - len + 1));
            let (k, l) = (rng.index(3), rng.index(5 - len + 1));
            let d = normalized_sq_distance(&ds.row(i)[j..j + len], &ds.row(k)[l..l + len]);
            max = max.max(d);
        }
        assert_eq!(eps, PruningThreshold::Radius(max));
    }

    #[test]
    fn constant_data_gives_zero() {
        let ds = TimeSeriesDataset::new(vec![vec![5.0; 6]; 4], vec![0, 1, 0, 1]).unwrap();
        for p in [1, 25, 100] {
            let eps = estimate_threshold(&ds, p, &[2, 4], &mut Rng::new(9)).unwrap();
            assert_eq!(eps, PruningThreshold::Radius(0.0));
        }
    }

    #[test]
    fn p0_disables_pruning() {
        let eps = estimate_threshold(&ramp_dataset(), 0, &[2], &mut Rng::new(1)).unwrap();
        assert_eq!(eps, PruningThreshold::Disabled);
    }

    #[test]
    fn rejects_bad_lengths() {
        let ds = ramp_dataset();
        assert!(estimate_threshold(&ds, 25, &[], &mut Rng::new(1)).is_err());
        assert!(estimate_threshold(&ds, 25, &[6], &mut Rng::new(1)).is_err());
        assert!(estimate_threshold(&ds, 101, &[2], &mut Rng::new(1)).is_err());
    }
}
