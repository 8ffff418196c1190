use super::Classifier;

/// Single-pass mean and sample variance (Welford's recurrence).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunningStats {
    count: f64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn update(&mut self, value: f64) {
        self.count += 1.0;
        let delta = value - self.mean;
        self.mean += delta / self.count;
        self.m2 += delta * (value - self.mean);
    }

    pub fn count(&self) -> f64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample variance with an `n - 1` denominator; zero below two values.
    pub fn variance(&self) -> f64 {
        if self.count < 2.0 {
            0.0
        } else {
            self.m2 / (self.count - 1.0)
        }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }
}

/// Per-feature running z-score scaling.
#[derive(Debug, Clone)]
pub struct OnlineStandardizer {
    stats: Vec<RunningStats>,
    epsilon: f64,
}

impl OnlineStandardizer {
    pub const DEFAULT_EPSILON: f64 = 1e-12;

    pub fn new(n_features: usize) -> Self {
        Self::with_epsilon(n_features, Self::DEFAULT_EPSILON)
    }

    pub fn with_epsilon(n_features: usize, epsilon: f64) -> Self {
        Self {
            stats: vec![RunningStats::new(); n_features],
            epsilon,
        }
    }

    pub fn update(&mut self, x: &[f64]) {
        for (s, &v) in self.stats.iter_mut().zip(x) {
            s.update(v);
        }
    }

    /// `(x - mean) / sqrt(var + epsilon)`; identity until two observations.
    pub fn transform(&self, x: &[f64]) -> Vec<f64> {
        if self.stats.first().map_or(0.0, RunningStats::count) < 2.0 {
            return x.to_vec();
        }
        self.stats
            .iter()
            .zip(x)
            .map(|(s, &v)| (v - s.mean()) / (s.variance() + self.epsilon).sqrt())
            .collect()
    }
}

/// Feeds standardized features to the wrapped learner.
///
/// Training updates the scaler first, then passes the instance scaled with
/// the updated statistics.
#[derive(Debug, Clone)]
pub struct Standardized<M> {
    scaler: OnlineStandardizer,
    inner: M,
}

impl<M: Classifier> Standardized<M> {
    pub fn new(inner: M, n_features: usize) -> Self {
        Self {
            scaler: OnlineStandardizer::new(n_features),
            inner,
        }
    }

    pub fn inner(&self) -> &M {
        &self.inner
    }
}

impl<M: Classifier> Classifier for Standardized<M> {
    fn n_classes(&self) -> usize {
        self.inner.n_classes()
    }

    fn learn_one(&mut self, x: &[f64], y: usize) {
        self.scaler.update(x);
        let z = self.scaler.transform(x);
        self.inner.learn_one(&z, y);
    }

    fn predict_proba(&self, x: &[f64]) -> Vec<f64> {
        self.inner.predict_proba(&self.scaler.transform(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;

    #[test]
    fn two_values() {
        let mut s = RunningStats::new();
        s.update(2.0);
        s.update(4.0);
        assert_eq!(s.mean(), 3.0);
        assert_eq!(s.variance(), 2.0);
    }

    proptest! {
        #[test]
        fn matches_two_pass(values in proptest::collection::vec(-1e3f64..1e3, 2..400)) {
            let mut s = RunningStats::new();
            values.iter().for_each(|&v| s.update(v));
            let n = values.len() as f64;
            let mean = values.iter().sum::<f64>() / n;
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
            prop_assert!((s.mean() - mean).abs() <= 1e-9 * mean.abs().max(1.0));
            prop_assert!((s.variance() - var).abs() <= 1e-9 * var.max(1.0));
        }
    }

    #[test]
    fn long_sequence_matches_two_pass() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let values: Vec<f64> = (0..10_000).map(|_| rng.gen::<f64>() * 1e4 - 3e3).collect();
        let mut s = RunningStats::new();
        values.iter().for_each(|&v| s.update(v));
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!(((s.mean() - mean) / mean).abs() < 1e-9);
        assert!(((s.variance() - var) / var).abs() < 1e-9);
    }

    #[test]
    fn standardizer_identity_below_two() {
        let mut z = OnlineStandardizer::new(2);
        assert_eq!(z.transform(&[3.0, 4.0]), vec![3.0, 4.0]);
        z.update(&[3.0, 4.0]);
        assert_eq!(z.transform(&[3.0, 4.0]), vec![3.0, 4.0]);
    }

    #[test]
    fn standardizer_converges_to_unit_scale() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let mut z = OnlineStandardizer::new(1);
        let mut out = RunningStats::new();
        for _ in 0..100_000 {
            let v = 40.0 + 7.0 * (rng.gen::<f64>() - 0.5);
            z.update(&[v]);
            out.update(z.transform(&[v])[0]);
        }
        assert!(out.mean().abs() < 0.05, "mean {}", out.mean());
        assert!((out.variance() - 1.0).abs() < 0.05, "var {}", out.variance());
    }
}
