//! Incremental single classifiers and the contract every model implements.

mod baseline;
mod knn;
mod linear;
mod naive_bayes;
mod stats;

pub use baseline::{BaselineKind, MajorityClass, NoChange};
pub use knn::SlidingWindowKnn;
pub use linear::{LinearModel, LinearSvm, PassiveAggressive, Perceptron};
pub use naive_bayes::GaussianNb;
pub use stats::{OnlineStandardizer, RunningStats, Standardized};

pub(crate) use naive_bayes::gaussian_posterior;

/// Uniform learn/predict interface shared by learners, trees and ensembles.
///
/// `predict_proba` returns `n_classes()` non-negative entries summing to one
/// (uniform before any training) and `predict_one` is its argmax with ties
/// going to the lowest class index.
pub trait Classifier: Send {
    fn n_classes(&self) -> usize;

    fn learn_one(&mut self, x: &[f64], y: usize);

    fn predict_proba(&self, x: &[f64]) -> Vec<f64>;

    fn predict_one(&self, x: &[f64]) -> usize {
        argmax(&self.predict_proba(x))
    }

    /// Number of top-level members; 1 for a single model.
    fn member_count(&self) -> usize {
        1
    }
}

impl<C: Classifier + ?Sized> Classifier for Box<C> {
    fn n_classes(&self) -> usize {
        (**self).n_classes()
    }

    fn learn_one(&mut self, x: &[f64], y: usize) {
        (**self).learn_one(x, y)
    }

    fn predict_proba(&self, x: &[f64]) -> Vec<f64> {
        (**self).predict_proba(x)
    }

    fn predict_one(&self, x: &[f64]) -> usize {
        (**self).predict_one(x)
    }

    fn member_count(&self) -> usize {
        (**self).member_count()
    }
}

const TIE_TOLERANCE: f64 = 1e-12;

/// Index of the largest entry; the first one wins ties, including entries
/// that differ only by rounding (relative gap below `1e-12`).
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        let top = values[best];
        if v - top > TIE_TOLERANCE * top.abs().max(1.0) {
            best = i;
        }
    }
    best
}

pub fn uniform(n_classes: usize) -> Vec<f64> {
    vec![1.0 / n_classes as f64; n_classes]
}

/// Scales a non-negative vector to sum to one; all-zero becomes uniform.
pub(crate) fn normalize(mut values: Vec<f64>) -> Vec<f64> {
    let total: f64 = values.iter().sum();
    if total > 0.0 && total.is_finite() {
        values.iter_mut().for_each(|v| *v /= total);
        values
    } else {
        uniform(values.len())
    }
}

/// Exponentiates log-scores after subtracting their maximum and normalizes.
pub(crate) fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return uniform(scores.len());
    }
    normalize(scores.iter().map(|s| (s - max).exp()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmax_prefers_lowest_index_on_ties() {
        assert_eq!(argmax(&[0.5, 0.5]), 0);
        assert_eq!(argmax(&[0.1, 0.3, 0.3, 0.3]), 1);
        assert_eq!(argmax(&[0.0, 0.0, 1.0]), 2);
    }

    #[test]
    fn softmax_is_stable_for_large_scores() {
        let p = softmax(&[1000.0, 1000.0, -1000.0]);
        assert!((p[0] - 0.5).abs() < 1e-12 && p[2] < 1e-300);
    }
}
