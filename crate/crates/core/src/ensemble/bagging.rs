use rand_chacha::ChaCha8Rng;

use super::{member_rng, poisson_sample, weighted_average};
use crate::learners::Classifier;

/// How many times each member trains on an arriving instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BagWeighting {
    Poisson(f64),
    /// Every member trains exactly `k` times (useful for tests).
    Fixed(u32),
}

/// Oza-Russell online bagging: every member trains `k ~ Poisson(lambda)`
/// times per instance and the members vote with equal weight.
pub struct OnlineBagging {
    members: Vec<Box<dyn Classifier>>,
    rngs: Vec<ChaCha8Rng>,
    weighting: BagWeighting,
    n_classes: usize,
    updates: Vec<u64>,
}

impl OnlineBagging {
    pub fn new(members: Vec<Box<dyn Classifier>>, weighting: BagWeighting, seed: u64) -> Self {
        assert!(!members.is_empty(), "a bag needs at least one member");
        let n_classes = members[0].n_classes();
        let rngs = (0..members.len()).map(|i| member_rng(seed, i)).collect();
        let updates = vec![0; members.len()];
        Self {
            members,
            rngs,
            weighting,
            n_classes,
            updates,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Total `learn_one` calls each member has received.
    pub fn member_updates(&self) -> &[u64] {
        &self.updates
    }
}

impl Classifier for OnlineBagging {
    fn n_classes(&self) -> usize {
        self.n_classes
    }

    fn member_count(&self) -> usize {
        self.members.len()
    }

    fn learn_one(&mut self, x: &[f64], y: usize) {
        for ((member, rng), updates) in self
            .members
            .iter_mut()
            .zip(&mut self.rngs)
            .zip(&mut self.updates)
        {
            let k = match self.weighting {
                BagWeighting::Poisson(lambda) => poisson_sample(lambda, rng),
                BagWeighting::Fixed(k) => k,
            };
            for _ in 0..k {
                member.learn_one(x, y);
            }
            *updates += u64::from(k);
        }
    }

    fn predict_proba(&self, x: &[f64]) -> Vec<f64> {
        let probas: Vec<Vec<f64>> = self.members.iter().map(|m| m.predict_proba(x)).collect();
        weighted_average(&probas, &vec![1.0; probas.len()], self.n_classes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::GaussianNb;
    use crate::stream::{generate_drift_stream, DriftStreamSpec};
    use crate::tree::HoeffdingTree;

    #[test]
    fn forced_single_member_matches_bare_learner() {
        let spec = DriftStreamSpec::inversion(3_000, 0.1, 8);
        let mut bare = HoeffdingTree::hoeffding(2, 2);
        let mut bag = OnlineBagging::new(
            vec![Box::new(HoeffdingTree::hoeffding(2, 2))],
            BagWeighting::Fixed(1),
            1,
        );
        for inst in generate_drift_stream(&spec, 6_000).unwrap() {
            for (a, b) in bag.predict_proba(&inst.features).iter().zip(bare.predict_proba(&inst.features)) {
                assert!((a - b).abs() < 1e-12);
            }
            bag.learn_one(&inst.features, inst.label);
            bare.learn_one(&inst.features, inst.label);
        }
    }

    #[test]
    fn zero_draw_leaves_member_untouched() {
        let mut bag = OnlineBagging::new(
            vec![Box::new(GaussianNb::new(1, 2))],
            BagWeighting::Fixed(0),
            1,
        );
        bag.learn_one(&[1.0], 1);
        assert_eq!(bag.member_updates(), &[0]);
        assert_eq!(bag.predict_proba(&[1.0]), vec![0.5, 0.5]);
    }

    #[test]
    fn update_counts_concentrate() {
        let members: Vec<Box<dyn Classifier>> =
            (0..10).map(|_| Box::new(GaussianNb::new(1, 2)) as Box<dyn Classifier>).collect();
        let mut bag = OnlineBagging::new(members, BagWeighting::Poisson(1.0), 42);
        for i in 0..10_000 {
            bag.learn_one(&[i as f64], i % 2);
        }
        for &u in bag.member_updates() {
            assert!((u as f64 - 10_000.0).abs() < 1_000.0, "{u}");
        }
    }
}
