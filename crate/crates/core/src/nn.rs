//! Incremental leave-one-out 1-NN over shapelet-transformed features.
//!
//! [`PairwiseState`] keeps `X[i][m] = Σ_features (d_i − d_m)²` for `i < m`
//! as a packed upper triangle. Adding or removing one feature vector costs
//! `Θ(N²)`, and so does a LOOCV query, independent of how many features
//! have been accumulated.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseState {
    n: usize,
    upper: Vec<f64>,
    feature_count: usize,
}

impl PairwiseState {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            upper: vec![0.0; n * n.saturating_sub(1) / 2],
            feature_count: 0,
        }
    }

    /// Builds a state from a full symmetric matrix with zero diagonal.
    pub fn from_dense(matrix: &[Vec<f64>], feature_count: usize) -> Result<Self> {
        let n = matrix.len();
        let mut state = Self::new(n);
        state.feature_count = feature_count;
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            if row[i] != 0.0 {
                return Err(Error::config(format!("diagonal entry {i} is not zero")));
            }
            for m in i + 1..n {
                if row[m] != matrix[m][i] {
                    return Err(Error::config(format!("entry ({i}, {m}) is not symmetric")));
                }
                let k = state.offset(i, m);
                state.upper[k] = row[m];
            }
        }
        Ok(state)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn feature_count(&self) -> usize {
        self.feature_count
    }

    #[inline]
    fn offset(&self, i: usize, m: usize) -> usize {
        debug_assert!(i < m && m < self.n);
        i * (2 * self.n - i - 1) / 2 + (m - i - 1)
    }

    /// `X[i][m]`, mirrored; zero on the diagonal.
    pub fn get(&self, i: usize, m: usize) -> f64 {
        match i.cmp(&m) {
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Less => self.upper[self.offset(i, m)],
            std::cmp::Ordering::Greater => self.upper[self.offset(m, i)],
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|m| self.get(i, m)).collect())
            .collect()
    }

    fn check_len(&self, d: &[f64]) -> Result<()> {
        if d.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: d.len(),
            });
        }
        Ok(())
    }

    /// `X[i][m] += (d_i − d_m)²` for all `i < m`.
    pub fn add_feature(&mut self, d: &[f64]) -> Result<()> {
        self.check_len(d)?;
        let mut k = 0;
        for i in 0..self.n {
            for m in i + 1..self.n {
                let diff = d[i] - d[m];
                self.upper[k] += diff * diff;
                k += 1;
            }
        }
        self.feature_count += 1;
        Ok(())
    }

    /// Inverse of [`add_feature`](Self::add_feature). `d` must have been
    /// added before and not yet removed.
    pub fn remove_feature(&mut self, d: &[f64]) -> Result<()> {
        self.check_len(d)?;
        let mut k = 0;
        for i in 0..self.n {
            for m in i + 1..self.n {
                let diff = d[i] - d[m];
                self.upper[k] -= diff * diff;
                k += 1;
            }
        }
        self.feature_count = self.feature_count.saturating_sub(1);
        Ok(())
    }

    /// Index of the nearest other series; ties go to the smallest index.
    pub fn nearest_neighbor(&self, i: usize) -> usize {
        let mut best = usize::MAX;
        let mut best_dist = f64::INFINITY;
        for m in (0..self.n).filter(|&m| m != i) {
            let d = self.get(i, m);
            if d < best_dist || best == usize::MAX {
                best = m;
                best_dist = d;
            }
        }
        best
    }

    /// Number of series whose nearest neighbour shares their label.
    pub fn loocv_correct(&self, labels: &[i64]) -> usize {
        (0..self.n)
            .filter(|&i| labels[self.nearest_neighbor(i)] == labels[i])
            .count()
    }

    /// Leave-one-out 1-NN accuracy under `X`.
    pub fn loocv_accuracy(&self, labels: &[i64]) -> Result<f64> {
        self.check_len_labels(labels)?;
        if self.n < 2 {
            return Err(Error::TooFewSeries(self.n));
        }
        Ok(self.loocv_correct(labels) as f64 / self.n as f64)
    }

    fn check_len_labels(&self, labels: &[i64]) -> Result<()> {
        if labels.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: labels.len(),
            });
        }
        Ok(())
    }
}
