//! Online bagging, adaptive random forest, weighted majority and two-member
//! voting ensembles, plus the registry that builds every named model.

mod arf;
mod bagging;
mod majority;
mod registry;
mod vote;

pub use arf::{AdaptiveRandomForest, ArfConfig};
pub use bagging::{BagWeighting, OnlineBagging};
pub use majority::WeightedMajority;
pub use registry::{build_model, build_named_ensemble, Hyperparams, ModelKind, MODEL_KEYS};
pub use vote::{VoteEnsemble, VoteMode};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Independent generator for member `index` of an ensemble seeded with
/// `seed`. Each member reads its own ChaCha stream, so adding members never
/// shifts the draws of existing ones.
pub fn member_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Seed for member `index`, drawn from its own stream.
pub fn member_seed(seed: u64, index: usize) -> u64 {
    member_rng(seed, index).gen()
}

/// `k ~ Poisson(lambda)` by sequential search on the inverse CDF.
pub fn poisson_sample<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> u32 {
    debug_assert!(lambda > 0.0);
    let u: f64 = rng.gen();
    let mut k = 0u32;
    let mut p = (-lambda).exp();
    let mut cdf = p;
    while u > cdf && p > 0.0 {
        k += 1;
        p *= lambda / f64::from(k);
        cdf += p;
    }
    k
}

/// `sum_i w_i p_i / sum_i w_i`; equal weights when every weight is zero.
pub fn weighted_average(probas: &[Vec<f64>], weights: &[f64], n_classes: usize) -> Vec<f64> {
    let total: f64 = weights.iter().sum();
    let mut out = vec![0.0; n_classes];
    if probas.is_empty() {
        return crate::learners::uniform(n_classes);
    }
    let equal = !(total > 0.0);
    for (p, &w) in probas.iter().zip(weights) {
        let w = if equal { 1.0 } else { w };
        for (o, v) in out.iter_mut().zip(p) {
            *o += w * v;
        }
    }
    crate::learners::normalize(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::argmax;

    #[test]
    fn poisson_one_pmf() {
        let mut rng = member_rng(42, 0);
        let draws = 1_000_000;
        let mut hist = [0u32; 4];
        for _ in 0..draws {
            let k = poisson_sample(1.0, &mut rng) as usize;
            if k < 4 {
                hist[k] += 1;
            }
        }
        let e = (-1f64).exp();
        for (k, expected) in [(0, e), (1, e), (2, e / 2.0), (3, e / 6.0)] {
            let freq = f64::from(hist[k]) / draws as f64;
            assert!((freq - expected).abs() < 0.002, "k={k}: {freq} vs {expected}");
        }
    }

    #[test]
    fn poisson_six_mean() {
        let mut rng = member_rng(7, 3);
        let n = 1_000_000;
        let total: u64 = (0..n).map(|_| u64::from(poisson_sample(6.0, &mut rng))).sum();
        let mean = total as f64 / n as f64;
        assert!((mean - 6.0).abs() < 0.02, "{mean}");
    }

    #[test]
    fn poisson_is_deterministic() {
        let a: Vec<u32> = {
            let mut r = member_rng(5, 1);
            (0..100).map(|_| poisson_sample(1.0, &mut r)).collect()
        };
        let b: Vec<u32> = {
            let mut r = member_rng(5, 1);
            (0..100).map(|_| poisson_sample(1.0, &mut r)).collect()
        };
        assert_eq!(a, b);
        assert_ne!(member_seed(5, 0), member_seed(5, 1));
    }

    #[test]
    fn weighted_average_examples() {
        let unanimous = weighted_average(&[vec![0.0, 1.0], vec![0.0, 1.0]], &[1.0, 1.0], 2);
        assert_eq!(unanimous, vec![0.0, 1.0]);

        let tie = weighted_average(&[vec![1.0, 0.0], vec![0.0, 1.0]], &[1.0, 1.0], 2);
        assert_eq!(tie, vec![0.5, 0.5]);
        assert_eq!(argmax(&tie), 0);

        let w = weighted_average(&[vec![0.6, 0.4], vec![0.2, 0.8]], &[3.0, 1.0], 2);
        assert!((w[0] - 0.5).abs() < 1e-12 && (w[1] - 0.5).abs() < 1e-12);
        assert_eq!(argmax(&w), 0);

        let zero = weighted_average(&[vec![1.0, 0.0], vec![0.5, 0.5]], &[0.0, 0.0], 2);
        assert_eq!(zero, vec![0.75, 0.25]);
    }
}
