//! Sample representation and the empirical CDF.
//!
//! A [`Dataset`] stores the distinct sorted values of a sample together with
//! their multiplicities. Every other module works on index ranges into it.

use crate::error::{Error, Result};

/// Sorted, deduplicated sample with per-value multiplicities.
///
/// `cum[i]` holds the number of observations with value `<= values[i]`, so
/// counts over any contiguous index range are O(1).
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    values: Vec<f64>,
    counts: Vec<u64>,
    cum: Vec<u64>,
}

impl Dataset {
    /// Sorts `raw` and collapses ties into counts.
    pub fn from_raw(raw: &[f64]) -> Result<Self> {
        if let Some(&bad) = raw.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidValue(bad));
        }
        if raw.len() < 2 {
            return Err(Error::InsufficientData {
                needed: 2,
                got: raw.len(),
            });
        }
        let mut sorted = raw.to_vec();
        sorted.sort_unstable_by(f64::total_cmp);
        Ok(Self::from_sorted_unchecked(&sorted))
    }

    /// Builds from already sorted finite input. Ties are still collapsed.
    pub fn from_sorted(sorted: &[f64]) -> Result<Self> {
        if let Some(&bad) = sorted.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidValue(bad));
        }
        if sorted.len() < 2 {
            return Err(Error::InsufficientData {
                needed: 2,
                got: sorted.len(),
            });
        }
        if sorted.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter("input is not sorted".into()));
        }
        Ok(Self::from_sorted_unchecked(sorted))
    }

    fn from_sorted_unchecked(sorted: &[f64]) -> Self {
        let mut values: Vec<f64> = Vec::with_capacity(sorted.len());
        let mut counts: Vec<u64> = Vec::with_capacity(sorted.len());
        for &v in sorted {
            // -0.0 and 0.0 compare equal and are merged here.
            match values.last() {
                Some(&last) if last == v => *counts.last_mut().unwrap() += 1,
                _ => {
                    values.push(v);
                    counts.push(1);
                }
            }
        }
        Self::from_parts_unchecked(values, counts)
    }

    /// Builds from explicit `(values, counts)`.
    pub fn from_counts(values: Vec<f64>, counts: Vec<u64>) -> Result<Self> {
        if values.len() != counts.len() {
            return Err(Error::InvalidParameter(
                "values and counts differ in length".into(),
            ));
        }
        if values.is_empty() {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidValue(bad));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "values must be strictly increasing".into(),
            ));
        }
        if counts.contains(&0) {
            return Err(Error::InvalidParameter("counts must be positive".into()));
        }
        Ok(Self::from_parts_unchecked(values, counts))
    }

    fn from_parts_unchecked(values: Vec<f64>, counts: Vec<u64>) -> Self {
        let mut cum = Vec::with_capacity(counts.len());
        let mut acc = 0u64;
        for &c in &counts {
            acc += c;
            cum.push(acc);
        }
        Dataset {
            values,
            counts,
            cum,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of distinct values.
    pub fn n_unique(&self) -> usize {
        self.values.len()
    }

    /// Number of observations, ties included.
    pub fn n_total(&self) -> u64 {
        *self.cum.last().unwrap_or(&0)
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Cumulative count through index `i` (inclusive).
    pub fn cum_count(&self, i: usize) -> u64 {
        self.cum[i]
    }

    pub(crate) fn cum(&self) -> &[u64] {
        &self.cum
    }

    /// Number of observations with index in `lo..=hi`.
    pub fn count_between(&self, lo: usize, hi: usize) -> u64 {
        debug_assert!(lo <= hi);
        self.cum[hi] - if lo == 0 { 0 } else { self.cum[lo - 1] }
    }

    /// Index of `x` among the stored values, if present.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        self.values.binary_search_by(|v| v.total_cmp(&x)).ok()
    }

    /// Index range `lo..=hi` of the values inside the closed interval `[a, b]`.
    pub fn range_indices(&self, a: f64, b: f64) -> Option<(usize, usize)> {
        let lo = self.values.partition_point(|&v| v < a);
        let hi = self.values.partition_point(|&v| v <= b);
        if lo >= hi {
            None
        } else {
            Some((lo, hi - 1))
        }
    }

    /// Sub-dataset of the values in the closed interval `[a, b]`.
    pub fn restrict(&self, a: f64, b: f64) -> Result<Dataset> {
        if a > b {
            return Err(Error::EmptyInterval(a, b));
        }
        let (lo, hi) = self.range_indices(a, b).ok_or(Error::EmptyInterval(a, b))?;
        Ok(self.slice(lo, hi))
    }

    /// Sub-dataset of the index range `lo..=hi`.
    pub fn slice(&self, lo: usize, hi: usize) -> Dataset {
        Self::from_parts_unchecked(
            self.values[lo..=hi].to_vec(),
            self.counts[lo..=hi].to_vec(),
        )
    }

    /// Expands back into a sorted sample with ties repeated.
    pub fn expand(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n_total() as usize);
        for (&v, &c) in self.values.iter().zip(&self.counts) {
            out.extend(std::iter::repeat_n(v, c as usize));
        }
        out
    }

    pub fn mean(&self) -> f64 {
        let n = self.n_total() as f64;
        self.values
            .iter()
            .zip(&self.counts)
            .map(|(&v, &c)| v * c as f64)
            .sum::<f64>()
            / n
    }

    pub fn ecdf(&self) -> StepEcdf {
        let n = self.n_total() as f64;
        let points = self
            .values
            .iter()
            .zip(&self.cum)
            .map(|(&x, &c)| (x, c as f64 / n))
            .collect();
        StepEcdf { points }
    }

    /// Fails with [`Error::DegenerateSupport`] when only one distinct value exists.
    pub fn require_spread(&self) -> Result<()> {
        if self.values.len() < 2 {
            Err(Error::DegenerateSupport)
        } else {
            Ok(())
        }
    }
}

/// Right-continuous step ecdf stored as its upper-right corners `(x_i, F(x_i))`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepEcdf {
    points: Vec<(f64, f64)>,
}

impl StepEcdf {
    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let k = self.points.partition_point(|&(px, _)| px <= x);
        if k == 0 {
            0.0
        } else {
            self.points[k - 1].1
        }
    }
}
