use super::weighted_average;
use crate::learners::Classifier;

/// Littlestone-Warmuth weighted majority over learning experts.
///
/// Each expert that mispredicts an instance has its weight multiplied by
/// `beta`; weights are rescaled to sum to one only when the largest falls
/// below `1e-100`.
pub struct WeightedMajority {
    experts: Vec<Box<dyn Classifier>>,
    weights: Vec<f64>,
    beta: f64,
    n_classes: usize,
}

const RESCALE_BELOW: f64 = 1e-100;

impl WeightedMajority {
    pub const DEFAULT_BETA: f64 = 0.5;

    pub fn new(experts: Vec<Box<dyn Classifier>>, beta: f64) -> Self {
        assert!(!experts.is_empty(), "need at least one expert");
        assert!(beta > 0.0 && beta < 1.0, "beta must lie in (0, 1)");
        let n_classes = experts[0].n_classes();
        let weights = vec![1.0; experts.len()];
        Self {
            experts,
            weights,
            beta,
            n_classes,
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl Classifier for WeightedMajority {
    fn n_classes(&self) -> usize {
        self.n_classes
    }

    fn member_count(&self) -> usize {
        self.experts.len()
    }

    fn learn_one(&mut self, x: &[f64], y: usize) {
        for (expert, weight) in self.experts.iter().zip(&mut self.weights) {
            if expert.predict_one(x) != y {
                *weight *= self.beta;
            }
        }
        for expert in &mut self.experts {
            expert.learn_one(x, y);
        }
        let max = self.weights.iter().copied().fold(0.0, f64::max);
        if max < RESCALE_BELOW {
            let total: f64 = self.weights.iter().sum();
            self.weights.iter_mut().for_each(|w| *w /= total);
        }
    }

    fn predict_proba(&self, x: &[f64]) -> Vec<f64> {
        let probas: Vec<Vec<f64>> = self.experts.iter().map(|e| e.predict_proba(x)).collect();
        weighted_average(&probas, &self.weights, self.n_classes)
    }
}
