use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::leaf::{evaluate_split_candidates, Leaf, SplitCandidate};
use super::{hoeffding_bound, TreeConfig};
use crate::drift::{adwin_cut_threshold, Adwin};
use crate::learners::{argmax, Classifier};

/// Record of one split decision, kept for inspection.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitEvent {
    pub feature: usize,
    pub threshold: f64,
    pub merit: f64,
    /// Merit of the best candidate minus the best on any other feature.
    pub gain_gap: f64,
    pub epsilon: f64,
    pub weight: f64,
}

/// Structural counters of a tree.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TreeStats {
    pub nodes: usize,
    pub leaves: usize,
    pub depth: usize,
    pub alternates: usize,
}

#[derive(Debug, Clone)]
enum Kind {
    Leaf(Leaf),
    Split {
        feature: usize,
        threshold: f64,
        children: Box<[Node; 2]>,
    },
}

/// Alternate subtree grown next to a node whose error monitor fired.
#[derive(Debug, Clone)]
struct Alternate {
    node: Node,
    host_errors: f64,
    own_errors: f64,
    seen: u64,
}

#[derive(Debug, Clone)]
struct Node {
    kind: Kind,
    monitor: Option<Adwin>,
    alternate: Option<Box<Alternate>>,
}

impl Node {
    fn leaf(leaf: Leaf, drift_delta: Option<f64>) -> Self {
        Self {
            kind: Kind::Leaf(leaf),
            monitor: drift_delta.map(Adwin::new),
            alternate: None,
        }
    }

    fn route(&self, x: &[f64]) -> &Leaf {
        let mut node = self;
        loop {
            match &node.kind {
                Kind::Leaf(leaf) => return leaf,
                Kind::Split {
                    feature,
                    threshold,
                    children,
                } => node = &children[usize::from(x[*feature] > *threshold)],
            }
        }
    }

    fn stats(&self, depth: usize, acc: &mut TreeStats) {
        acc.nodes += 1;
        acc.depth = acc.depth.max(depth);
        if let Some(alt) = &self.alternate {
            let mut inner = TreeStats::default();
            alt.node.stats(0, &mut inner);
            acc.alternates += inner.nodes;
        }
        match &self.kind {
            Kind::Leaf(_) => acc.leaves += 1,
            Kind::Split { children, .. } => {
                children.iter().for_each(|c| c.stats(depth + 1, acc));
            }
        }
    }

    fn leaf_weight(&self) -> f64 {
        match &self.kind {
            Kind::Leaf(leaf) => leaf.total_weight(),
            Kind::Split { children, .. } => children.iter().map(Node::leaf_weight).sum(),
        }
    }
}

/// Incremental decision tree with Hoeffding-bound split decisions.
///
/// With `TreeConfig::drift_delta` set every node monitors its 0/1 error
/// with ADWIN; when the error rises significantly the node grows an
/// alternate subtree that replaces it once it is significantly more
/// accurate (Hoeffding adaptive tree).
#[derive(Debug, Clone)]
pub struct HoeffdingTree {
    root: Node,
    config: TreeConfig,
    n_features: usize,
    n_classes: usize,
    rng: ChaCha8Rng,
    split_log: Vec<SplitEvent>,
    alternates_started: u64,
    alternates_promoted: u64,
    alternates_discarded: u64,
    learned: u64,
}

struct Context<'a> {
    config: &'a TreeConfig,
    n_features: usize,
    n_classes: usize,
    rng: &'a mut ChaCha8Rng,
    split_log: &'a mut Vec<SplitEvent>,
    started: &'a mut u64,
    promoted: &'a mut u64,
    discarded: &'a mut u64,
}

impl Context<'_> {
    fn new_leaf(&mut self, counts: Option<Vec<f64>>) -> Node {
        let mut leaf = Leaf::new(self.n_features, self.n_classes, counts);
        if let Some(m) = self.config.max_features.filter(|&m| m < self.n_features) {
            leaf.allowed_features = Some(sample_features(self.rng, self.n_features, m));
        }
        Node::leaf(leaf, self.config.drift_delta)
    }

    /// Trains a leaf node and splits it when the Hoeffding test passes.
    fn learn_leaf(&mut self, node: &mut Node, x: &[f64], y: usize) {
        let Kind::Leaf(leaf) = &mut node.kind else {
            unreachable!("learn_leaf on a split node")
        };
        leaf.learn(x, y, self.config.leaf_prediction, self.config.variance_floor);
        let weight = leaf.total_weight();
        if weight - leaf.weight_at_last_attempt < self.config.grace_period as f64 {
            return;
        }
        leaf.weight_at_last_attempt = weight;
        let candidates = evaluate_split_candidates(leaf, self.config.n_thresholds);
        let Some(best) = candidates.first() else {
            return;
        };
        let runner_up = candidates
            .iter()
            .find(|c| c.feature != best.feature)
            .map_or(0.0, |c| c.merit);
        let range = (self.n_classes.max(2) as f64).log2();
        let epsilon = hoeffding_bound(range, self.config.split_confidence, weight);
        let gap = best.merit - runner_up;
        if best.merit > 0.0 && (gap > epsilon || epsilon < self.config.tie_threshold) {
            self.split_log.push(SplitEvent {
                feature: best.feature,
                threshold: best.threshold,
                merit: best.merit,
                gain_gap: gap,
                epsilon,
                weight,
            });
            let SplitCandidate {
                feature,
                threshold,
                mut left,
                mut right,
                ..
            } = best.clone();
            // Observers only cover what this leaf saw itself; inherited
            // counts are shared out in the same proportions.
            for (c, &total) in leaf.class_counts().iter().enumerate() {
                let seen = left[c] + right[c];
                if seen > 0.0 {
                    left[c] *= total / seen;
                    right[c] *= total / seen;
                } else {
                    left[c] = total / 2.0;
                    right[c] = total / 2.0;
                }
            }
            let children = Box::new([self.new_leaf(Some(left)), self.new_leaf(Some(right))]);
            node.kind = Kind::Split {
                feature,
                threshold,
                children,
            };
            if let Some(delta) = self.config.drift_delta {
                node.monitor = Some(Adwin::new(delta));
            }
        }
    }

    fn learn_plain(&mut self, node: &mut Node, x: &[f64], y: usize) {
        match &mut node.kind {
            Kind::Split {
                feature,
                threshold,
                children,
            } => {
                let child = &mut children[usize::from(x[*feature] > *threshold)];
                self.learn_plain(child, x, y);
            }
            Kind::Leaf(_) => self.learn_leaf(node, x, y),
        }
    }

    fn learn_adaptive(&mut self, node: &mut Node, x: &[f64], y: usize) {
        let mode = self.config.leaf_prediction;
        let floor = self.config.variance_floor;
        let wrong = argmax(&node.route(x).predict_proba(x, mode, floor)) != y;

        if let Some(monitor) = &mut node.monitor {
            let before = monitor.estimate();
            let fired = monitor.add(f64::from(u8::from(wrong))).unwrap_or(false);
            if fired && monitor.estimate() > before && node.alternate.is_none() {
                let fresh = self.new_leaf(None);
                node.alternate = Some(Box::new(Alternate {
                    node: fresh,
                    host_errors: 0.0,
                    own_errors: 0.0,
                    seen: 0,
                }));
                *self.started += 1;
            }
        }

        if let Some(mut alt) = node.alternate.take() {
            let alt_wrong = argmax(&alt.node.route(x).predict_proba(x, mode, floor)) != y;
            alt.host_errors += f64::from(u8::from(wrong));
            alt.own_errors += f64::from(u8::from(alt_wrong));
            alt.seen += 1;
            self.learn_adaptive(&mut alt.node, x, y);

            let n = alt.seen;
            let delta = self.config.drift_delta.unwrap_or(crate::drift::DEFAULT_DELTA);
            let bound = adwin_cut_threshold(n, n, 2 * n, delta);
            let advantage = (alt.host_errors - alt.own_errors) / n as f64;
            if advantage >= bound {
                *self.promoted += 1;
                *node = alt.node;
                return;
            }
            if -advantage >= bound {
                *self.discarded += 1;
            } else {
                node.alternate = Some(alt);
            }
        }

        match &mut node.kind {
            Kind::Split {
                feature,
                threshold,
                children,
            } => {
                let child = &mut children[usize::from(x[*feature] > *threshold)];
                self.learn_adaptive(child, x, y);
            }
            Kind::Leaf(_) => self.learn_leaf(node, x, y),
        }
    }
}

/// `m` distinct feature indices in ascending order (partial Fisher-Yates).
fn sample_features(rng: &mut ChaCha8Rng, n_features: usize, m: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n_features).collect();
    for i in 0..m {
        let j = rng.gen_range(i..n_features);
        pool.swap(i, j);
    }
    pool.truncate(m);
    pool.sort_unstable();
    pool
}

impl HoeffdingTree {
    pub fn new(n_features: usize, n_classes: usize, config: TreeConfig) -> Self {
        Self::with_seed(n_features, n_classes, config, 0)
    }

    /// `seed` drives the per-leaf feature subsets when `max_features` is set.
    pub fn with_seed(n_features: usize, n_classes: usize, config: TreeConfig, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut split_log = Vec::new();
        let (mut started, mut promoted, mut discarded) = (0, 0, 0);
        let root = Context {
            config: &config,
            n_features,
            n_classes,
            rng: &mut rng,
            split_log: &mut split_log,
            started: &mut started,
            promoted: &mut promoted,
            discarded: &mut discarded,
        }
        .new_leaf(None);
        Self {
            root,
            config,
            n_features,
            n_classes,
            rng,
            split_log,
            alternates_started: 0,
            alternates_promoted: 0,
            alternates_discarded: 0,
            learned: 0,
        }
    }

    pub fn hoeffding(n_features: usize, n_classes: usize) -> Self {
        Self::new(n_features, n_classes, TreeConfig::hoeffding())
    }

    pub fn adaptive(n_features: usize, n_classes: usize) -> Self {
        Self::new(n_features, n_classes, TreeConfig::adaptive())
    }

    pub fn config(&self) -> &TreeConfig {
        &self.config
    }

    pub fn is_adaptive(&self) -> bool {
        self.config.drift_delta.is_some()
    }

    pub fn split_events(&self) -> &[SplitEvent] {
        &self.split_log
    }

    pub fn stats(&self) -> TreeStats {
        let mut stats = TreeStats::default();
        self.root.stats(0, &mut stats);
        stats
    }

    /// Total class weight held by the leaves of the main tree.
    pub fn leaf_weight(&self) -> f64 {
        self.root.leaf_weight()
    }

    pub fn instances_learned(&self) -> u64 {
        self.learned
    }

    /// `(started, promoted, discarded)` alternate subtree counts.
    pub fn alternate_counts(&self) -> (u64, u64, u64) {
        (
            self.alternates_started,
            self.alternates_promoted,
            self.alternates_discarded,
        )
    }

    /// `(feature, threshold)` of the root split, if any.
    pub fn root_split(&self) -> Option<(usize, f64)> {
        match &self.root.kind {
            Kind::Split {
                feature, threshold, ..
            } => Some((*feature, *threshold)),
            Kind::Leaf(_) => None,
        }
    }

    /// The leaf `x` is routed to.
    pub fn leaf_for(&self, x: &[f64]) -> &Leaf {
        self.root.route(x)
    }
}

impl Classifier for HoeffdingTree {
    fn n_classes(&self) -> usize {
        self.n_classes
    }

    fn learn_one(&mut self, x: &[f64], y: usize) {
        self.learned += 1;
        let mut ctx = Context {
            config: &self.config,
            n_features: self.n_features,
            n_classes: self.n_classes,
            rng: &mut self.rng,
            split_log: &mut self.split_log,
            started: &mut self.alternates_started,
            promoted: &mut self.alternates_promoted,
            discarded: &mut self.alternates_discarded,
        };
        if self.config.drift_delta.is_some() {
            ctx.learn_adaptive(&mut self.root, x, y);
        } else {
            ctx.learn_plain(&mut self.root, x, y);
        }
    }

    fn predict_proba(&self, x: &[f64]) -> Vec<f64> {
        self.root
            .route(x)
            .predict_proba(x, self.config.leaf_prediction, self.config.variance_floor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::{generate_drift_stream, Concept, DriftStreamSpec};

    #[test]
    fn grace_period_gates_the_first_attempt() {
        let mut tree = HoeffdingTree::hoeffding(1, 2);
        for i in 0..199 {
            tree.learn_one(&[i as f64], usize::from(i >= 100));
        }
        assert!(tree.root_split().is_none());
        tree.learn_one(&[199.0], 1);
        assert!(tree.root_split().is_some());
    }

    #[test]
    fn single_class_never_splits() {
        let mut tree = HoeffdingTree::hoeffding(2, 3);
        for i in 0..5_000 {
            tree.learn_one(&[i as f64, (i % 7) as f64], 2);
        }
        assert_eq!(tree.stats().nodes, 1);
    }

    #[test]
    fn subspace_equal_to_feature_count_is_the_full_set() {
        let config = TreeConfig {
            max_features: Some(4),
            ..TreeConfig::hoeffding()
        };
        let tree = HoeffdingTree::with_seed(4, 2, config, 9);
        assert!(tree.leaf_for(&[0.0; 4]).allowed_features.is_none());
    }

    #[test]
    fn subspace_sampling_is_distinct() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let s = sample_features(&mut rng, 18, 5);
            assert_eq!(s.len(), 5);
            assert!(s.windows(2).all(|w| w[0] < w[1]));
            assert!(s.iter().all(|&f| f < 18));
        }
    }

    #[test]
    fn splits_respect_the_hoeffding_gate() {
        let spec = DriftStreamSpec::stationary(Concept::threshold(0, 5.0), 0.05, 3, 3);
        let mut tree = HoeffdingTree::hoeffding(3, 2);
        for inst in generate_drift_stream(&spec, 30_000).unwrap() {
            tree.learn_one(&inst.features, inst.label);
        }
        assert!(!tree.split_events().is_empty());
        for e in tree.split_events() {
            assert!(e.gain_gap > e.epsilon || e.epsilon < 0.05, "{e:?}");
        }
        let stats = tree.stats();
        assert!(stats.nodes <= 2 * tree.split_events().len() + 1);
        assert!((tree.leaf_weight() - 30_000.0).abs() < 1e-6, "{}", tree.leaf_weight());
    }
}
