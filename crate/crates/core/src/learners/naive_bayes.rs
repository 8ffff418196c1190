use super::{softmax, uniform, Classifier, RunningStats};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

fn log_gaussian(x: f64, mean: f64, variance: f64) -> f64 {
    let d = x - mean;
    -0.5 * (LN_2PI + variance.ln()) - d * d / (2.0 * variance)
}

/// Naive Bayes posterior from class weights and per-(class, feature) moments.
///
/// Priors use add-one smoothing over `counts`. Classes whose feature moments
/// are empty cannot be scored and get zero mass; if no class can be scored
/// the smoothed priors are returned.
pub(crate) fn gaussian_posterior<'a>(
    counts: &[f64],
    x: &[f64],
    variance_floor: f64,
    stats: impl Fn(usize, usize) -> &'a RunningStats,
) -> Vec<f64> {
    let n_classes = counts.len();
    let total: f64 = counts.iter().sum();
    let mut log_scores = vec![f64::NEG_INFINITY; n_classes];
    let mut scored = false;
    for (c, score) in log_scores.iter_mut().enumerate() {
        if x.is_empty() || stats(c, 0).count() == 0.0 {
            continue;
        }
        let mut s = ((counts[c] + 1.0) / (total + n_classes as f64)).ln();
        for (j, &v) in x.iter().enumerate() {
            let st = stats(c, j);
            s += log_gaussian(v, st.mean(), st.variance().max(variance_floor));
        }
        *score = s;
        scored = true;
    }
    if scored {
        softmax(&log_scores)
    } else if total > 0.0 {
        counts
            .iter()
            .map(|c| (c + 1.0) / (total + n_classes as f64))
            .collect()
    } else {
        uniform(n_classes)
    }
}

/// Incremental Gaussian naive Bayes.
#[derive(Debug, Clone)]
pub struct GaussianNb {
    counts: Vec<f64>,
    /// `stats[class][feature]`.
    stats: Vec<Vec<RunningStats>>,
    variance_floor: f64,
}

impl GaussianNb {
    pub const DEFAULT_VARIANCE_FLOOR: f64 = 1e-6;

    pub fn new(n_features: usize, n_classes: usize) -> Self {
        Self::with_variance_floor(n_features, n_classes, Self::DEFAULT_VARIANCE_FLOOR)
    }

    pub fn with_variance_floor(n_features: usize, n_classes: usize, variance_floor: f64) -> Self {
        Self {
            counts: vec![0.0; n_classes],
            stats: vec![vec![RunningStats::new(); n_features]; n_classes],
            variance_floor,
        }
    }

    pub fn class_count(&self, class: usize) -> f64 {
        self.counts[class]
    }

    pub fn feature_stats(&self, class: usize, feature: usize) -> &RunningStats {
        &self.stats[class][feature]
    }
}

impl Classifier for GaussianNb {
    fn n_classes(&self) -> usize {
        self.counts.len()
    }

    fn learn_one(&mut self, x: &[f64], y: usize) {
        self.counts[y] += 1.0;
        for (s, &v) in self.stats[y].iter_mut().zip(x) {
            s.update(v);
        }
    }

    fn predict_proba(&self, x: &[f64]) -> Vec<f64> {
        gaussian_posterior(&self.counts, x, self.variance_floor, |c, j| {
            &self.stats[c][j]
        })
    }
}
