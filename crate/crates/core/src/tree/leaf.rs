use super::LeafPrediction;
use crate::learners::{argmax, gaussian_posterior, RunningStats};

/// Per-class Gaussian summary of one numeric feature at a leaf.
#[derive(Debug, Clone)]
pub struct GaussianObserver {
    stats: Vec<RunningStats>,
    min: Vec<f64>,
    max: Vec<f64>,
}

impl GaussianObserver {
    pub fn new(n_classes: usize) -> Self {
        Self {
            stats: vec![RunningStats::new(); n_classes],
            min: vec![f64::INFINITY; n_classes],
            max: vec![f64::NEG_INFINITY; n_classes],
        }
    }

    pub fn update(&mut self, value: f64, class: usize) {
        self.stats[class].update(value);
        self.min[class] = self.min[class].min(value);
        self.max[class] = self.max[class].max(value);
    }

    pub fn class_stats(&self, class: usize) -> &RunningStats {
        &self.stats[class]
    }

    /// Estimated `(left, right)` class masses for `x <= threshold`.
    fn split_masses(&self, threshold: f64) -> (Vec<f64>, Vec<f64>) {
        let n = self.stats.len();
        let mut left = vec![0.0; n];
        let mut right = vec![0.0; n];
        for c in 0..n {
            let stats = &self.stats[c];
            let count = stats.count();
            if count == 0.0 {
                continue;
            }
            let below = if threshold < self.min[c] {
                0.0
            } else if threshold >= self.max[c] {
                count
            } else {
                let sd = stats.std_dev();
                if sd > 0.0 {
                    count * normal_cdf((threshold - stats.mean()) / sd)
                } else if threshold >= stats.mean() {
                    count
                } else {
                    0.0
                }
            };
            left[c] = below;
            right[c] = count - below;
        }
        (left, right)
    }

    /// Evenly spaced thresholds strictly inside the observed range.
    fn thresholds(&self, n_thresholds: usize) -> Vec<f64> {
        let lo = self.min.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.max.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !(lo < hi) {
            return Vec::new();
        }
        let step = (hi - lo) / (n_thresholds + 1) as f64;
        (1..=n_thresholds).map(|i| lo + step * i as f64).collect()
    }
}

fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

fn entropy(dist: &[f64]) -> f64 {
    let total: f64 = dist.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    dist.iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| {
            let p = w / total;
            -p * p.log2()
        })
        .sum()
}

/// A proposed binary split `x[feature] <= threshold` and its information gain.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitCandidate {
    pub feature: usize,
    pub threshold: f64,
    /// Information gain in bits.
    pub merit: f64,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

/// Leaf of a Hoeffding tree: class weights and one observer per feature.
#[derive(Debug, Clone)]
pub struct Leaf {
    pub(crate) class_counts: Vec<f64>,
    pub(crate) observers: Vec<GaussianObserver>,
    pub(crate) weight_at_last_attempt: f64,
    majority_correct: f64,
    bayes_correct: f64,
    /// Features this leaf may split on; `None` means all.
    pub(crate) allowed_features: Option<Vec<usize>>,
}

impl Leaf {
    pub fn new(n_features: usize, n_classes: usize, initial_counts: Option<Vec<f64>>) -> Self {
        let class_counts = initial_counts.unwrap_or_else(|| vec![0.0; n_classes]);
        let weight = class_counts.iter().sum();
        Self {
            class_counts,
            observers: vec![GaussianObserver::new(n_classes); n_features],
            weight_at_last_attempt: weight,
            majority_correct: 0.0,
            bayes_correct: 0.0,
            allowed_features: None,
        }
    }

    pub fn class_counts(&self) -> &[f64] {
        &self.class_counts
    }

    pub fn total_weight(&self) -> f64 {
        self.class_counts.iter().sum()
    }

    pub fn observer(&self, feature: usize) -> &GaussianObserver {
        &self.observers[feature]
    }

    /// Number of classes with observed feature statistics.
    fn observed_classes(&self) -> usize {
        self.observers.first().map_or(0, |o| {
            o.stats.iter().filter(|s| s.count() > 0.0).count()
        })
    }

    pub(crate) fn learn(&mut self, x: &[f64], y: usize, mode: LeafPrediction, variance_floor: f64) {
        if mode == LeafPrediction::Adaptive {
            if argmax(&self.class_counts) == y {
                self.majority_correct += 1.0;
            }
            if argmax(&self.naive_bayes(x, variance_floor)) == y {
                self.bayes_correct += 1.0;
            }
        }
        self.class_counts[y] += 1.0;
        for (observer, &v) in self.observers.iter_mut().zip(x) {
            observer.update(v, y);
        }
    }

    fn smoothed_counts(&self) -> Vec<f64> {
        let total = self.total_weight();
        let n = self.class_counts.len() as f64;
        self.class_counts
            .iter()
            .map(|c| (c + 1.0) / (total + n))
            .collect()
    }

    fn naive_bayes(&self, x: &[f64], variance_floor: f64) -> Vec<f64> {
        gaussian_posterior(&self.class_counts, x, variance_floor, |c, j| {
            &self.observers[j].stats[c]
        })
    }

    pub(crate) fn predict_proba(&self, x: &[f64], mode: LeafPrediction, variance_floor: f64) -> Vec<f64> {
        match mode {
            LeafPrediction::MajorityClass => self.smoothed_counts(),
            LeafPrediction::NaiveBayes => self.naive_bayes(x, variance_floor),
            LeafPrediction::Adaptive if self.bayes_correct > self.majority_correct => {
                self.naive_bayes(x, variance_floor)
            }
            LeafPrediction::Adaptive => self.smoothed_counts(),
        }
    }
}

/// Candidate splits of a leaf, best first.
///
/// Each allowed feature proposes `n_thresholds` thresholds spread evenly
/// over its observed range; child class masses are estimated from the
/// per-class Gaussians. Fewer than two observed classes yields nothing.
pub fn evaluate_split_candidates(leaf: &Leaf, n_thresholds: usize) -> Vec<SplitCandidate> {
    if leaf.observed_classes() < 2 {
        return Vec::new();
    }
    let n_classes = leaf.class_counts.len();
    let max_merit = (n_classes as f64).log2();
    let all: Vec<usize>;
    let features = match &leaf.allowed_features {
        Some(subset) => subset.as_slice(),
        None => {
            all = (0..leaf.observers.len()).collect();
            all.as_slice()
        }
    };

    let mut candidates = Vec::new();
    for &feature in features {
        let observer = &leaf.observers[feature];
        let parent: Vec<f64> = observer.stats.iter().map(RunningStats::count).collect();
        let parent_entropy = entropy(&parent);
        let total: f64 = parent.iter().sum();
        for threshold in observer.thresholds(n_thresholds) {
            let (left, right) = observer.split_masses(threshold);
            let wl: f64 = left.iter().sum();
            let wr: f64 = right.iter().sum();
            let children = (wl * entropy(&left) + wr * entropy(&right)) / total;
            let merit = (parent_entropy - children).clamp(0.0, max_merit);
            candidates.push(SplitCandidate {
                feature,
                threshold,
                merit,
                left,
                right,
            });
        }
    }
    candidates.sort_by(|a, b| {
        b.merit
            .total_cmp(&a.merit)
            .then(a.feature.cmp(&b.feature))
            .then(a.threshold.total_cmp(&b.threshold))
    });
    candidates
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn leaf_with(n_features: usize, n_classes: usize, rows: &[(Vec<f64>, usize)]) -> Leaf {
        let mut leaf = Leaf::new(n_features, n_classes, None);
        for (x, y) in rows {
            leaf.learn(x, *y, LeafPrediction::MajorityClass, 1e-6);
        }
        leaf
    }

    #[test]
    fn empty_leaf_is_uniform() {
        let leaf = Leaf::new(2, 4, None);
        assert_eq!(leaf.predict_proba(&[0.0, 0.0], LeafPrediction::Adaptive, 1e-6), vec![0.25; 4]);
    }

    #[test]
    fn majority_mode_smoothing() {
        let leaf = Leaf::new(1, 2, Some(vec![90.0, 10.0]));
        let p = leaf.predict_proba(&[0.0], LeafPrediction::MajorityClass, 1e-6);
        assert!((p[0] - 91.0 / 102.0).abs() < 1e-12);
        assert!((p[0] - 0.8922).abs() < 1e-4 && (p[1] - 0.1078).abs() < 1e-4);
    }

    #[test]
    fn separated_feature_wins_with_full_gain() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rows: Vec<_> = (0..400)
            .map(|i| {
                let y = i % 2;
                let mut x: Vec<f64> = (0..5).map(|_| rng.gen::<f64>()).collect();
                x[3] = if y == 0 { rng.gen::<f64>() } else { 2.0 + rng.gen::<f64>() };
                (x, y)
            })
            .collect();
        let leaf = leaf_with(5, 2, &rows);
        let candidates = evaluate_split_candidates(&leaf, 10);
        assert_eq!(candidates[0].feature, 3);
        assert!((candidates[0].merit - 1.0).abs() < 0.01, "{}", candidates[0].merit);
        assert!(candidates.windows(2).all(|w| w[0].merit >= w[1].merit));
    }

    #[test]
    fn identical_distributions_give_no_gain() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rows: Vec<_> = (0..2000)
            .map(|i| ((0..3).map(|_| rng.gen::<f64>()).collect(), i % 3))
            .collect();
        let leaf = leaf_with(3, 3, &rows);
        let candidates = evaluate_split_candidates(&leaf, 10);
        assert!(!candidates.is_empty());
        assert!(candidates.iter().all(|c| c.merit <= 0.01), "{}", candidates[0].merit);
        assert!(candidates.iter().all(|c| c.merit <= 3f64.log2()));
    }

    #[test]
    fn single_class_has_no_candidates() {
        let rows: Vec<_> = (0..50).map(|i| (vec![i as f64], 1)).collect();
        assert!(evaluate_split_candidates(&leaf_with(1, 2, &rows), 10).is_empty());
    }

    #[test]
    fn masses_are_conserved() {
        let rows: Vec<_> = (0..300).map(|i| (vec![(i % 17) as f64], i % 3)).collect();
        let leaf = leaf_with(1, 3, &rows);
        for c in evaluate_split_candidates(&leaf, 10) {
            for k in 0..3 {
                let total = leaf.observer(0).class_stats(k).count();
                assert!((c.left[k] + c.right[k] - total).abs() < 1e-9);
            }
        }
    }
}
