use std::collections::VecDeque;

use super::{uniform, Classifier};

/// k-nearest neighbours over a bounded FIFO window of recent instances.
///
/// Distances are Euclidean on whatever features it is given; wrap it in
/// [`super::Standardized`] for scaled inputs.
#[derive(Debug, Clone)]
pub struct SlidingWindowKnn {
    window: VecDeque<(Vec<f64>, usize)>,
    capacity: usize,
    k: usize,
    n_classes: usize,
}

impl SlidingWindowKnn {
    pub const DEFAULT_K: usize = 10;
    pub const DEFAULT_WINDOW: usize = 1000;

    pub fn new(n_classes: usize, k: usize, capacity: usize) -> Self {
        assert!(k >= 1 && capacity >= 1, "k and window size must be positive");
        Self {
            window: VecDeque::with_capacity(capacity),
            capacity,
            k,
            n_classes,
        }
    }

    pub fn len(&self) -> usize {
        self.window.len()
    }

    pub fn is_empty(&self) -> bool {
        self.window.is_empty()
    }

    pub fn stored(&self) -> impl Iterator<Item = &(Vec<f64>, usize)> {
        self.window.iter()
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

impl Classifier for SlidingWindowKnn {
    fn n_classes(&self) -> usize {
        self.n_classes
    }

    fn learn_one(&mut self, x: &[f64], y: usize) {
        if self.window.len() == self.capacity {
            self.window.pop_front();
        }
        self.window.push_back((x.to_vec(), y));
    }

    fn predict_proba(&self, x: &[f64]) -> Vec<f64> {
        if self.window.is_empty() {
            return uniform(self.n_classes);
        }
        // (distance, age rank); the index keeps older entries first on ties.
        let mut scored: Vec<(f64, usize)> = self
            .window
            .iter()
            .enumerate()
            .map(|(i, (p, _))| (squared_distance(p, x), i))
            .collect();
        let k = self.k.min(scored.len());
        let by_distance = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if k < scored.len() {
            scored.select_nth_unstable_by(k - 1, by_distance);
        }
        let mut proba = vec![0.0; self.n_classes];
        for &(_, i) in &scored[..k] {
            proba[self.window[i].1] += 1.0;
        }
        proba.iter_mut().for_each(|p| *p /= k as f64);
        proba
    }
}
