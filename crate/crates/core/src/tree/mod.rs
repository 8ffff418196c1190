//! Hoeffding tree (VFDT) and Hoeffding adaptive tree learners.

mod hoeffding;
mod leaf;

pub use hoeffding::{HoeffdingTree, SplitEvent, TreeStats};
pub use leaf::{evaluate_split_candidates, GaussianObserver, Leaf, SplitCandidate};

/// How a leaf turns its statistics into a class distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeafPrediction {
    MajorityClass,
    NaiveBayes,
    /// Naive Bayes when it has out-predicted the majority class on the
    /// instances the leaf has seen, majority class otherwise.
    Adaptive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeConfig {
    /// Instances a leaf accumulates between split attempts.
    pub grace_period: usize,
    /// Hoeffding bound confidence (`delta`).
    pub split_confidence: f64,
    pub tie_threshold: f64,
    /// Candidate thresholds proposed per feature.
    pub n_thresholds: usize,
    pub variance_floor: f64,
    pub leaf_prediction: LeafPrediction,
    /// ADWIN delta for per-node error monitors; `Some` turns the tree into
    /// a Hoeffding adaptive tree.
    pub drift_delta: Option<f64>,
    /// Size of the random feature subset each leaf may split on.
    pub max_features: Option<usize>,
}

impl Default for TreeConfig {
    fn default() -> Self {
        Self {
            grace_period: 200,
            split_confidence: 1e-7,
            tie_threshold: 0.05,
            n_thresholds: 10,
            variance_floor: 1e-6,
            leaf_prediction: LeafPrediction::Adaptive,
            drift_delta: None,
            max_features: None,
        }
    }
}

impl TreeConfig {
    pub fn hoeffding() -> Self {
        Self::default()
    }

    pub fn adaptive() -> Self {
        Self {
            drift_delta: Some(crate::drift::DEFAULT_DELTA),
            ..Self::default()
        }
    }
}

/// `sqrt(R^2 ln(1/delta) / (2n))`.
pub fn hoeffding_bound(range: f64, delta: f64, n: f64) -> f64 {
    (range * range * (1.0 / delta).ln() / (2.0 * n)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_spot_values() {
        let eps = hoeffding_bound(1.0, 0.05, 50.0);
        assert!((eps - (20f64.ln() / 100.0).sqrt()).abs() < 1e-15);
        assert!((eps - 0.17309).abs() < 1e-5);

        let r = 5f64.log2();
        let eps = hoeffding_bound(r, 1e-7, 200.0);
        assert!((eps - (r * r * 1e7f64.ln() / 400.0).sqrt()).abs() < 1e-15);
        assert!((eps - 0.4661).abs() < 1e-4, "{eps}");
    }

    #[test]
    fn bound_shrinks_with_n() {
        let mut last = f64::INFINITY;
        for n in [1.0, 10.0, 1e3, 1e6, 1e12] {
            let eps = hoeffding_bound(1.0, 1e-7, n);
            assert!(eps < last);
            last = eps;
        }
        assert!(last < 1e-5);
    }
}
