use super::{argmax, softmax, Classifier};

/// One weight row and bias per class (one-vs-rest).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
}

impl LinearModel {
    pub fn zeros(n_features: usize, n_classes: usize) -> Self {
        Self {
            weights: vec![vec![0.0; n_features]; n_classes],
            bias: vec![0.0; n_classes],
        }
    }

    pub fn score(&self, class: usize, x: &[f64]) -> f64 {
        self.weights[class]
            .iter()
            .zip(x)
            .map(|(w, v)| w * v)
            .sum::<f64>()
            + self.bias[class]
    }

    pub fn scores(&self, x: &[f64]) -> Vec<f64> {
        (0..self.bias.len()).map(|c| self.score(c, x)).collect()
    }

    fn add_scaled(&mut self, class: usize, x: &[f64], step: f64) {
        for (w, v) in self.weights[class].iter_mut().zip(x) {
            *w += step * v;
        }
        self.bias[class] += step;
    }

    pub fn is_finite(&self) -> bool {
        self.bias.iter().all(|b| b.is_finite())
            && self.weights.iter().flatten().all(|w| w.is_finite())
    }

    pub fn norm(&self) -> f64 {
        self.weights.iter().flatten().map(|w| w * w).sum::<f64>().sqrt()
    }

    fn proba(&self, x: &[f64]) -> Vec<f64> {
        softmax(&self.scores(x))
    }
}

/// Highest-scoring class other than `y`.
fn best_rival(scores: &[f64], y: usize) -> usize {
    let mut rival = usize::from(y == 0);
    for (c, &s) in scores.iter().enumerate() {
        if c != y && s > scores[rival] {
            rival = c;
        }
    }
    rival
}

/// Mistake-driven multiclass perceptron.
#[derive(Debug, Clone)]
pub struct Perceptron {
    pub model: LinearModel,
    learning_rate: f64,
}

impl Perceptron {
    pub fn new(n_features: usize, n_classes: usize, learning_rate: f64) -> Self {
        Self {
            model: LinearModel::zeros(n_features, n_classes),
            learning_rate,
        }
    }
}

impl Classifier for Perceptron {
    fn n_classes(&self) -> usize {
        self.model.bias.len()
    }

    fn learn_one(&mut self, x: &[f64], y: usize) {
        let predicted = argmax(&self.model.scores(x));
        if predicted != y {
            self.model.add_scaled(y, x, self.learning_rate);
            self.model.add_scaled(predicted, x, -self.learning_rate);
        }
    }

    fn predict_proba(&self, x: &[f64]) -> Vec<f64> {
        self.model.proba(x)
    }
}

/// Multiclass passive-aggressive classifier (PA-I).
#[derive(Debug, Clone)]
pub struct PassiveAggressive {
    pub model: LinearModel,
    aggressiveness: f64,
}

impl PassiveAggressive {
    pub fn new(n_features: usize, n_classes: usize, aggressiveness: f64) -> Self {
        Self {
            model: LinearModel::zeros(n_features, n_classes),
            aggressiveness,
        }
    }

    /// Hinge loss of the current model on `(x, y)`.
    pub fn loss(&self, x: &[f64], y: usize) -> f64 {
        let scores = self.model.scores(x);
        let rival = best_rival(&scores, y);
        (1.0 - (scores[y] - scores[rival])).max(0.0)
    }
}

impl Classifier for PassiveAggressive {
    fn n_classes(&self) -> usize {
        self.model.bias.len()
    }

    fn learn_one(&mut self, x: &[f64], y: usize) {
        if self.model.bias.len() < 2 {
            return;
        }
        let scores = self.model.scores(x);
        let rival = best_rival(&scores, y);
        let loss = (1.0 - (scores[y] - scores[rival])).max(0.0);
        if loss == 0.0 {
            return;
        }
        let sq_norm: f64 = x.iter().map(|v| v * v).sum();
        let step = if sq_norm > 0.0 {
            loss / (2.0 * sq_norm)
        } else {
            f64::INFINITY
        };
        let tau = self.aggressiveness.min(step);
        self.model.add_scaled(y, x, tau);
        self.model.add_scaled(rival, x, -tau);
    }

    fn predict_proba(&self, x: &[f64]) -> Vec<f64> {
        self.model.proba(x)
    }
}

/// Linear SVM trained by one-vs-rest hinge-loss SGD with L2 shrinkage.
#[derive(Debug, Clone)]
pub struct LinearSvm {
    pub model: LinearModel,
    learning_rate: f64,
    lambda: f64,
}

impl LinearSvm {
    pub fn new(n_features: usize, n_classes: usize, learning_rate: f64, lambda: f64) -> Self {
        Self {
            model: LinearModel::zeros(n_features, n_classes),
            learning_rate,
            lambda,
        }
    }
}

impl Classifier for LinearSvm {
    fn n_classes(&self) -> usize {
        self.model.bias.len()
    }

    fn learn_one(&mut self, x: &[f64], y: usize) {
        let shrink = 1.0 - self.learning_rate * self.lambda;
        for c in 0..self.model.bias.len() {
            let target = if c == y { 1.0 } else { -1.0 };
            let violated = target * self.model.score(c, x) < 1.0;
            if shrink != 1.0 {
                self.model.weights[c].iter_mut().for_each(|w| *w *= shrink);
            }
            if violated {
                self.model.add_scaled(c, x, self.learning_rate * target);
            }
        }
    }

    fn predict_proba(&self, x: &[f64]) -> Vec<f64> {
        self.model.proba(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn perceptron_hand_trace() {
        let mut p = Perceptron::new(2, 2, 1.0);
        assert_eq!(p.predict_one(&[1.0, 0.0]), 0);
        p.learn_one(&[1.0, 0.0], 1);
        assert_eq!(p.model.weights, vec![vec![-1.0, 0.0], vec![1.0, 0.0]]);
        assert_eq!(p.model.bias, vec![-1.0, 1.0]);
        assert_eq!(p.predict_one(&[1.0, 0.0]), 1);
    }

    #[test]
    fn perceptron_ignores_correct_predictions() {
        let mut p = Perceptron::new(2, 2, 1.0);
        p.learn_one(&[1.0, 0.0], 1);
        let before = p.model.clone();
        p.learn_one(&[1.0, 0.0], 1);
        assert_eq!(p.model, before);
    }

    #[test]
    fn pa_first_step() {
        let mut pa = PassiveAggressive::new(2, 2, 1.0);
        assert_eq!(pa.loss(&[1.0, 0.0], 1), 1.0);
        pa.learn_one(&[1.0, 0.0], 1);
        assert_eq!(pa.model.weights[1], vec![0.5, 0.0]);
        assert_eq!(pa.model.weights[0], vec![-0.5, 0.0]);
    }

    #[test]
    fn pa_passive_on_zero_loss() {
        let mut pa = PassiveAggressive::new(2, 3, 1.0);
        for _ in 0..10 {
            pa.learn_one(&[1.0, -2.0], 2);
        }
        assert_eq!(pa.loss(&[1.0, -2.0], 2), 0.0);
        let before = pa.model.clone();
        pa.learn_one(&[1.0, -2.0], 2);
        assert_eq!(pa.model, before);
    }

    #[test]
    fn pa_replay_reaches_zero_loss() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let mut pa = PassiveAggressive::new(3, 4, 0.05);
            let x: Vec<f64> = (0..3).map(|_| rng.gen::<f64>() * 4.0 - 2.0).collect();
            let y = rng.gen_range(0..4);
            let mut steps = 0;
            let mut last = pa.loss(&x, y);
            while pa.loss(&x, y) > 0.0 {
                pa.learn_one(&x, y);
                let now = pa.loss(&x, y);
                assert!(now < last);
                last = now;
                steps += 1;
                assert!(steps < 10_000);
            }
        }
    }

    #[test]
    fn svm_first_step() {
        let mut svm = LinearSvm::new(2, 2, 0.1, 0.0);
        svm.learn_one(&[1.0, 0.0], 1);
        assert_eq!(svm.model.weights[1], vec![0.1, 0.0]);
        assert_eq!(svm.model.weights[0], vec![-0.1, 0.0]);
    }

    #[test]
    fn svm_no_loss_no_change() {
        let mut svm = LinearSvm::new(1, 2, 0.5, 0.0);
        for _ in 0..20 {
            svm.learn_one(&[2.0], 1);
        }
        let before = svm.model.clone();
        svm.learn_one(&[2.0], 1);
        assert_eq!(svm.model, before);
    }

    #[test]
    fn svm_weights_stay_bounded() {
        let mut svm = LinearSvm::new(2, 2, 0.1, 1e-4);
        let mut peak: f64 = 0.0;
        for i in 0..100_000 {
            let (x, y) = if i % 2 == 0 { ([3.0, 1.0], 0) } else { ([-3.0, -1.0], 1) };
            svm.learn_one(&x, y);
            peak = peak.max(svm.model.norm());
        }
        assert!(svm.model.is_finite());
        // Margin reached at |w.x| >= 1 with |x| = sqrt(10); shrinkage only
        // pulls the norm down from there.
        assert!(peak < 2.0, "peak norm {peak}");
    }
}
