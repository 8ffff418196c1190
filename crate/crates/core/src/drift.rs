//! ADWIN adaptive-windowing change detector.
//!
//! The window is an exponential histogram: level `l` holds up to `M` buckets
//! that each summarize `2^l` consecutive values. Inserting an `(M+1)`-th
//! bucket at a level merges the two oldest into one bucket on the next
//! level, so memory stays at `O(M log n)`.

use std::collections::VecDeque;

use crate::error::{Error, Result};

pub const DEFAULT_DELTA: f64 = 0.002;
pub const DEFAULT_MAX_BUCKETS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Bucket {
    sum: f64,
    count: u64,
}

/// Cut threshold for two sub-windows of sizes `n0` and `n1` in a window of
/// `total_n` values:
/// `sqrt(ln(4 total_n / delta) / (2 m))` with `m = 1 / (1/n0 + 1/n1)`.
pub fn adwin_cut_threshold(n0: u64, n1: u64, total_n: u64, delta: f64) -> f64 {
    let m = 1.0 / (1.0 / n0 as f64 + 1.0 / n1 as f64);
    ((4.0 * total_n as f64 / delta).ln() / (2.0 * m)).sqrt()
}

#[derive(Debug, Clone)]
pub struct Adwin {
    /// `levels[l]` holds buckets of `2^l` values, oldest at the front.
    levels: Vec<VecDeque<Bucket>>,
    total_sum: f64,
    total_count: u64,
    delta: f64,
    max_buckets: usize,
    detections: u64,
}

impl Default for Adwin {
    fn default() -> Self {
        Self::new(DEFAULT_DELTA)
    }
}

impl Adwin {
    pub fn new(delta: f64) -> Self {
        Self::with_max_buckets(delta, DEFAULT_MAX_BUCKETS)
    }

    pub fn with_max_buckets(delta: f64, max_buckets: usize) -> Self {
        assert!(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
        assert!(max_buckets >= 2, "need at least two buckets per level");
        Self {
            levels: Vec::new(),
            total_sum: 0.0,
            total_count: 0,
            delta,
            max_buckets,
            detections: 0,
        }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Number of values currently in the window.
    pub fn len(&self) -> u64 {
        self.total_count
    }

    pub fn is_empty(&self) -> bool {
        self.total_count == 0
    }

    pub fn sum(&self) -> f64 {
        self.total_sum
    }

    /// Number of `add` calls that dropped data.
    pub fn detections(&self) -> u64 {
        self.detections
    }

    pub fn bucket_count(&self) -> usize {
        self.levels.iter().map(VecDeque::len).sum()
    }

    pub fn mean(&self) -> Result<f64> {
        if self.total_count == 0 {
            return Err(Error::EmptyState("ADWIN window is empty"));
        }
        Ok(self.total_sum / self.total_count as f64)
    }

    /// Mean of an empty window is reported as zero.
    pub fn estimate(&self) -> f64 {
        self.mean().unwrap_or(0.0)
    }

    /// Appends `value` and shrinks the window while any split shows a
    /// significant change. Returns whether anything was dropped.
    pub fn add(&mut self, value: f64) -> Result<bool> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::Domain(format!("ADWIN input {value} outside [0, 1]")));
        }
        self.insert(value);
        let mut dropped = false;
        while self.find_cut() {
            self.drop_oldest();
            dropped = true;
        }
        if dropped {
            self.detections += 1;
        }
        Ok(dropped)
    }

    fn insert(&mut self, value: f64) {
        if self.levels.is_empty() {
            self.levels.push(VecDeque::new());
        }
        self.levels[0].push_back(Bucket {
            sum: value,
            count: 1,
        });
        self.total_sum += value;
        self.total_count += 1;

        let mut level = 0;
        while self.levels[level].len() > self.max_buckets {
            let a = self.levels[level].pop_front().expect("level over capacity");
            let b = self.levels[level].pop_front().expect("level over capacity");
            if level + 1 == self.levels.len() {
                self.levels.push(VecDeque::new());
            }
            self.levels[level + 1].push_back(Bucket {
                sum: a.sum + b.sum,
                count: a.count + b.count,
            });
            level += 1;
        }
    }

    /// Buckets from oldest to newest.
    fn buckets_oldest_first(&self) -> impl Iterator<Item = &Bucket> {
        self.levels.iter().rev().flat_map(|level| level.iter())
    }

    fn find_cut(&self) -> bool {
        let n = self.total_count;
        if n < 2 {
            return false;
        }
        let mut n0 = 0u64;
        let mut sum0 = 0.0;
        let buckets = self.bucket_count();
        for bucket in self.buckets_oldest_first().take(buckets - 1) {
            n0 += bucket.count;
            sum0 += bucket.sum;
            let n1 = n - n0;
            let mean0 = sum0 / n0 as f64;
            let mean1 = (self.total_sum - sum0) / n1 as f64;
            if (mean0 - mean1).abs() >= adwin_cut_threshold(n0, n1, n, self.delta) {
                return true;
            }
        }
        false
    }

    fn drop_oldest(&mut self) {
        while self.levels.last().is_some_and(VecDeque::is_empty) {
            self.levels.pop();
        }
        let top = self.levels.last_mut().expect("non-empty window");
        let bucket = top.pop_front().expect("non-empty level");
        self.total_sum -= bucket.sum;
        self.total_count -= bucket.count;
        while self.levels.last().is_some_and(VecDeque::is_empty) {
            self.levels.pop();
        }
        if self.total_count == 0 {
            self.total_sum = 0.0;
        }
    }

    #[cfg(test)]
    fn check_invariants(&self) {
        let count: u64 = self.buckets_oldest_first().map(|b| b.count).sum();
        let sum: f64 = self.buckets_oldest_first().map(|b| b.sum).sum();
        assert_eq!(count, self.total_count);
        assert!((sum - self.total_sum).abs() < 1e-9 * self.total_count.max(1) as f64);
        for (l, level) in self.levels.iter().enumerate() {
            assert!(level.len() <= self.max_buckets);
            assert!(level.iter().all(|b| b.count == 1 << l));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cut_threshold_spot_value() {
        let eps = adwin_cut_threshold(500, 500, 1000, 0.002);
        let expected = ((2_000_000f64).ln() / 500.0).sqrt();
        assert!((eps - expected).abs() < 1e-15);
        assert!((eps - 0.1703).abs() < 1e-4, "{eps}");
    }

    #[test]
    fn cut_threshold_monotonicity() {
        let small = adwin_cut_threshold(10, 10, 1000, 0.002);
        let large = adwin_cut_threshold(400, 400, 1000, 0.002);
        assert!(large < small);
        assert!(adwin_cut_threshold(10, 10, 1000, 0.001) > small);
        assert!(adwin_cut_threshold(10, 10, 2000, 0.002) > small);
        assert!(adwin_cut_threshold(1 << 40, 1 << 40, 1 << 41, 0.002) < 1e-5);
    }

    #[test]
    fn constant_stream_never_fires() {
        let mut w = Adwin::default();
        for _ in 0..10_000 {
            assert!(!w.add(0.5).unwrap());
        }
        assert_eq!(w.len(), 10_000);
        assert_eq!(w.detections(), 0);
        w.check_invariants();
    }

    #[test]
    fn mean_and_errors() {
        let mut w = Adwin::default();
        assert!(matches!(w.mean(), Err(Error::EmptyState(_))));
        w.add(0.0).unwrap();
        w.add(1.0).unwrap();
        assert_eq!(w.mean().unwrap(), 0.5);
        assert!(matches!(w.add(1.5), Err(Error::Domain(_))));
        assert!(w.add(f64::NAN).is_err());

        let mut w = Adwin::default();
        for _ in 0..100 {
            w.add(0.3).unwrap();
        }
        assert!((w.mean().unwrap() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn merges_preserve_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut w = Adwin::default();
        let mut raw = Vec::new();
        for _ in 0..10_000 {
            let v: f64 = rng.gen();
            raw.push(v);
            assert!(!w.add(v).unwrap());
            w.check_invariants();
        }
        let oracle = raw.iter().sum::<f64>() / raw.len() as f64;
        assert!((w.mean().unwrap() - oracle).abs() < 1e-9);
    }

    #[test]
    fn memory_is_logarithmic() {
        let mut w = Adwin::default();
        for i in 0..1_000_000u64 {
            w.add((i % 2) as f64).unwrap();
        }
        assert!(w.bucket_count() <= 5 * 21, "{} buckets", w.bucket_count());
        w.check_invariants();
    }

    #[test]
    fn detects_step_and_newest_bucket_survives() {
        let mut w = Adwin::default();
        for _ in 0..1000 {
            w.add(0.0).unwrap();
        }
        let mut fired = false;
        for _ in 0..200 {
            fired |= w.add(1.0).unwrap();
        }
        assert!(fired);
        assert!(!w.is_empty() && w.len() < 1200);
        assert!(w.mean().unwrap() > 0.9);
        w.check_invariants();
    }
}
