use super::weighted_average;
use crate::learners::Classifier;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VoteMode {
    /// Average of the members' probability vectors.
    Soft,
    /// Each member casts one vote for its predicted class.
    Hard,
}

/// Equal-weight vote over heterogeneous members that all see every instance.
pub struct VoteEnsemble {
    members: Vec<Box<dyn Classifier>>,
    mode: VoteMode,
    n_classes: usize,
}

impl VoteEnsemble {
    pub fn new(members: Vec<Box<dyn Classifier>>, mode: VoteMode) -> Self {
        assert!(!members.is_empty(), "need at least one member");
        let n_classes = members[0].n_classes();
        Self {
            members,
            mode,
            n_classes,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

impl Classifier for VoteEnsemble {
    fn n_classes(&self) -> usize {
        self.n_classes
    }

    fn member_count(&self) -> usize {
        self.members.len()
    }

    fn learn_one(&mut self, x: &[f64], y: usize) {
        for m in &mut self.members {
            m.learn_one(x, y);
        }
    }

    fn predict_proba(&self, x: &[f64]) -> Vec<f64> {
        let probas: Vec<Vec<f64>> = self
            .members
            .iter()
            .map(|m| match self.mode {
                VoteMode::Soft => m.predict_proba(x),
                VoteMode::Hard => {
                    let mut p = vec![0.0; self.n_classes];
                    p[m.predict_one(x)] = 1.0;
                    p
                }
            })
            .collect();
        weighted_average(&probas, &vec![1.0; probas.len()], self.n_classes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::majority::tests::Constant;
    use crate::learners::GaussianNb;

    #[test]
    fn disagreement_ties_to_lowest_class() {
        let vote = VoteEnsemble::new(vec![Box::new(Constant(1, 2)), Box::new(Constant(0, 2))], VoteMode::Soft);
        assert_eq!(vote.predict_proba(&[]), vec![0.5, 0.5]);
        assert_eq!(vote.predict_one(&[]), 0);
    }

    #[test]
    fn single_member_equals_member() {
        let mut vote = VoteEnsemble::new(vec![Box::new(GaussianNb::new(1, 2))], VoteMode::Soft);
        let mut nb = GaussianNb::new(1, 2);
        for i in 0..200 {
            let (x, y) = ([(i % 13) as f64], usize::from(i % 13 > 6));
            for (a, b) in vote.predict_proba(&x).iter().zip(nb.predict_proba(&x)) {
                assert!((a - b).abs() < 1e-12);
            }
            vote.learn_one(&x, y);
            nb.learn_one(&x, y);
        }
    }

    #[test]
    fn hard_mode_counts_votes() {
        let vote = VoteEnsemble::new(
            vec![Box::new(Constant(2, 3)), Box::new(Constant(2, 3)), Box::new(Constant(0, 3))],
            VoteMode::Hard,
        );
        let p = vote.predict_proba(&[]);
        assert!((p[2] - 2.0 / 3.0).abs() < 1e-12);
    }
}
