use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{member_rng, poisson_sample, weighted_average};
use crate::drift::Adwin;
use crate::learners::Classifier;
use crate::tree::{HoeffdingTree, TreeConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct ArfConfig {
    pub n_members: usize,
    /// Poisson rate of the per-member training weight.
    pub lambda: f64,
    /// Features each leaf may split on; `None` uses `floor(sqrt(F)) + 1`.
    pub max_features: Option<usize>,
    pub warning_delta: f64,
    pub drift_delta: f64,
    pub tree: TreeConfig,
}

impl Default for ArfConfig {
    fn default() -> Self {
        Self {
            n_members: 10,
            lambda: 6.0,
            max_features: None,
            warning_delta: 0.01,
            drift_delta: 0.001,
            tree: TreeConfig {
                grace_period: 50,
                split_confidence: 0.01,
                ..TreeConfig::hoeffding()
            },
        }
    }
}

impl ArfConfig {
    pub fn with_members(n_members: usize) -> Self {
        Self {
            n_members,
            ..Self::default()
        }
    }

    pub fn subspace_size(&self, n_features: usize) -> usize {
        self.max_features
            .unwrap_or_else(|| (n_features as f64).sqrt().floor() as usize + 1)
            .min(n_features)
    }
}

struct Member {
    tree: HoeffdingTree,
    background: Option<HoeffdingTree>,
    warning: Adwin,
    drift: Adwin,
    rng: ChaCha8Rng,
    correct: f64,
    seen: f64,
    replacements: u64,
}

impl Member {
    fn accuracy(&self) -> f64 {
        if self.seen > 0.0 {
            self.correct / self.seen
        } else {
            0.0
        }
    }
}

/// Adaptive random forest: Poisson(6)-weighted subspace Hoeffding trees, each
/// with an ADWIN warning detector that starts a background tree and an ADWIN
/// drift detector that swaps the background tree in.
pub struct AdaptiveRandomForest {
    members: Vec<Member>,
    config: ArfConfig,
    tree_config: TreeConfig,
    n_features: usize,
    n_classes: usize,
}

impl AdaptiveRandomForest {
    pub fn new(n_features: usize, n_classes: usize, config: ArfConfig, seed: u64) -> Self {
        assert!(config.n_members >= 1, "a forest needs at least one tree");
        let tree_config = TreeConfig {
            max_features: Some(config.subspace_size(n_features)),
            drift_delta: None,
            ..config.tree.clone()
        };
        let members = (0..config.n_members)
            .map(|i| {
                let mut rng = member_rng(seed, i);
                let tree = HoeffdingTree::with_seed(n_features, n_classes, tree_config.clone(), rng.gen());
                Member {
                    tree,
                    background: None,
                    warning: Adwin::new(config.warning_delta),
                    drift: Adwin::new(config.drift_delta),
                    rng,
                    correct: 0.0,
                    seen: 0.0,
                    replacements: 0,
                }
            })
            .collect();
        Self {
            members,
            config,
            tree_config,
            n_features,
            n_classes,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn config(&self) -> &ArfConfig {
        &self.config
    }

    /// Drift-triggered tree replacements per member.
    pub fn replacements(&self) -> Vec<u64> {
        self.members.iter().map(|m| m.replacements).collect()
    }

    pub fn background_count(&self) -> usize {
        self.members.iter().filter(|m| m.background.is_some()).count()
    }

    pub fn member_weights(&self) -> Vec<f64> {
        self.members.iter().map(Member::accuracy).collect()
    }

    pub fn trees(&self) -> impl Iterator<Item = &HoeffdingTree> {
        self.members.iter().map(|m| &m.tree)
    }

}

fn rose(detector: &mut Adwin, error: f64) -> bool {
    let before = detector.estimate();
    detector.add(error).unwrap_or(false) && detector.estimate() > before
}

impl Classifier for AdaptiveRandomForest {
    fn n_classes(&self) -> usize {
        self.n_classes
    }

    fn member_count(&self) -> usize {
        self.members.len()
    }

    fn learn_one(&mut self, x: &[f64], y: usize) {
        let Self {
            members,
            config,
            tree_config,
            n_features,
            n_classes,
        } = self;
        let fresh = |rng: &mut ChaCha8Rng| {
            HoeffdingTree::with_seed(*n_features, *n_classes, tree_config.clone(), rng.gen())
        };
        for member in members.iter_mut() {
            let wrong = member.tree.predict_one(x) != y;
            member.seen += 1.0;
            if !wrong {
                member.correct += 1.0;
            }

            let k = poisson_sample(config.lambda, &mut member.rng);
            for _ in 0..k {
                member.tree.learn_one(x, y);
                if let Some(bg) = &mut member.background {
                    bg.learn_one(x, y);
                }
            }

            let error = f64::from(u8::from(wrong));
            if rose(&mut member.warning, error) {
                member.background = Some(fresh(&mut member.rng));
                member.warning = Adwin::new(config.warning_delta);
            }
            if rose(&mut member.drift, error) {
                member.tree = match member.background.take() {
                    Some(bg) => bg,
                    None => fresh(&mut member.rng),
                };
                member.warning = Adwin::new(config.warning_delta);
                member.drift = Adwin::new(config.drift_delta);
                member.correct = 0.0;
                member.seen = 0.0;
                member.replacements += 1;
            }
        }
    }

    fn predict_proba(&self, x: &[f64]) -> Vec<f64> {
        let probas: Vec<Vec<f64>> = self.members.iter().map(|m| m.tree.predict_proba(x)).collect();
        weighted_average(&probas, &self.member_weights(), self.n_classes)
    }
}
