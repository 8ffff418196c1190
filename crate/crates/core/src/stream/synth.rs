use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Instance;
use crate::error::{Error, Result};

/// Upper bound of the uniformly sampled synthetic features, `[0, FEATURE_RANGE)`.
pub const FEATURE_RANGE: f64 = 10.0;

/// A labeling rule on one feature.
///
/// * `threshold`: class 0 when `x[feature] <= threshold`, else class 1.
/// * `inverted`: the complement of `threshold`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Concept {
    pub rule: String,
    pub feature: usize,
    pub threshold: f64,
}

impl Concept {
    pub fn threshold(feature: usize, threshold: f64) -> Self {
        Self {
            rule: "threshold".into(),
            feature,
            threshold,
        }
    }

    pub fn inverted(feature: usize, threshold: f64) -> Self {
        Self {
            rule: "inverted".into(),
            feature,
            threshold,
        }
    }

    fn compile(&self, n_features: usize) -> Result<CompiledRule> {
        let flipped = match self.rule.as_str() {
            "threshold" => false,
            "inverted" => true,
            other => return Err(Error::Spec(format!("unknown rule id `{other}`"))),
        };
        if self.feature >= n_features {
            return Err(Error::Spec(format!(
                "rule feature {} out of range for {n_features} features",
                self.feature
            )));
        }
        Ok(CompiledRule {
            feature: self.feature,
            threshold: self.threshold,
            flipped,
        })
    }
}

#[derive(Debug, Clone, Copy)]
struct CompiledRule {
    feature: usize,
    threshold: f64,
    flipped: bool,
}

impl CompiledRule {
    fn label(&self, x: &[f64]) -> usize {
        let below = x[self.feature] <= self.threshold;
        usize::from(below == self.flipped)
    }
}

/// Two-concept binary stream with an abrupt switch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftStreamSpec {
    pub concept_a: Concept,
    pub concept_b: Concept,
    pub switch_position: u64,
    pub noise_rate: f64,
    pub seed: u64,
    pub n_features: usize,
}

impl DriftStreamSpec {
    /// `x0 <= 5` stream over two features that inverts at `switch_position`.
    pub fn inversion(switch_position: u64, noise_rate: f64, seed: u64) -> Self {
        Self {
            concept_a: Concept::threshold(0, 5.0),
            concept_b: Concept::inverted(0, 5.0),
            switch_position,
            noise_rate,
            seed,
            n_features: 2,
        }
    }

    /// The same concept throughout.
    pub fn stationary(concept: Concept, noise_rate: f64, seed: u64, n_features: usize) -> Self {
        Self {
            concept_a: concept.clone(),
            concept_b: concept,
            switch_position: 0,
            noise_rate,
            seed,
            n_features,
        }
    }

    /// Noise-free label of `x` at stream position `position`.
    pub fn true_label(&self, x: &[f64], position: u64) -> Result<usize> {
        let concept = if position < self.switch_position {
            &self.concept_a
        } else {
            &self.concept_b
        };
        Ok(concept.compile(self.n_features)?.label(x))
    }
}

/// Deterministic instance iterator produced by [`generate_drift_stream`].
pub struct DriftStream {
    rng: ChaCha8Rng,
    before: CompiledRule,
    after: CompiledRule,
    switch_position: u64,
    noise_rate: f64,
    n_features: usize,
    position: u64,
    length: u64,
}

pub fn generate_drift_stream(spec: &DriftStreamSpec, length: u64) -> Result<DriftStream> {
    if length == 0 {
        return Err(Error::Spec("stream length must be positive".into()));
    }
    if spec.n_features == 0 {
        return Err(Error::Spec("at least one feature is required".into()));
    }
    if !(0.0..0.5).contains(&spec.noise_rate) {
        return Err(Error::Spec(format!(
            "noise rate {} outside [0, 0.5)",
            spec.noise_rate
        )));
    }
    Ok(DriftStream {
        rng: ChaCha8Rng::seed_from_u64(spec.seed),
        before: spec.concept_a.compile(spec.n_features)?,
        after: spec.concept_b.compile(spec.n_features)?,
        switch_position: spec.switch_position,
        noise_rate: spec.noise_rate,
        n_features: spec.n_features,
        position: 0,
        length,
    })
}

impl Iterator for DriftStream {
    type Item = Instance;

    fn next(&mut self) -> Option<Instance> {
        if self.position >= self.length {
            return None;
        }
        let features: Vec<f64> = (0..self.n_features)
            .map(|_| self.rng.gen::<f64>() * FEATURE_RANGE)
            .collect();
        let rule = if self.position < self.switch_position {
            &self.before
        } else {
            &self.after
        };
        let mut label = rule.label(&features);
        if self.rng.gen::<f64>() < self.noise_rate {
            label = 1 - label;
        }
        let instance = Instance::new(features, label, self.position);
        self.position += 1;
        Some(instance)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.length - self.position) as usize;
        (left, Some(left))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let spec = DriftStreamSpec::inversion(500, 0.1, 7);
        let a: Vec<_> = generate_drift_stream(&spec, 1000).unwrap().collect();
        let b: Vec<_> = generate_drift_stream(&spec, 1000).unwrap().collect();
        assert_eq!(a, b);
    }

    #[test]
    fn different_seeds_differ() {
        let a: Vec<_> = generate_drift_stream(&DriftStreamSpec::inversion(5_000, 0.1, 1), 10_000)
            .unwrap()
            .map(|i| i.label)
            .collect();
        let b: Vec<_> = generate_drift_stream(&DriftStreamSpec::inversion(5_000, 0.1, 2), 10_000)
            .unwrap()
            .map(|i| i.label)
            .collect();
        assert!(a.iter().zip(&b).any(|(x, y)| x != y));
    }

    #[test]
    fn noiseless_single_concept_is_exactly_the_rule() {
        let spec = DriftStreamSpec::stationary(Concept::threshold(1, 3.0), 0.0, 3, 3);
        for inst in generate_drift_stream(&spec, 2_000).unwrap() {
            assert_eq!(inst.label, usize::from(inst.features[1] > 3.0));
            assert!(inst.features.iter().all(|v| (0.0..FEATURE_RANGE).contains(v)));
        }
    }

    #[test]
    fn old_rule_fails_after_inversion() {
        // The pre-switch rule scored against the post-switch generator sits
        // at the noise floor: it is right only on flipped labels.
        let noise = 0.1;
        let spec = DriftStreamSpec::inversion(5_000, noise, 11);
        let old = Concept::threshold(0, 5.0).compile(2).unwrap();
        let (mut hits, mut total) = (0usize, 0usize);
        for inst in generate_drift_stream(&spec, 10_000).unwrap() {
            if inst.sequence_number >= 5_000 {
                total += 1;
                hits += usize::from(old.label(&inst.features) == inst.label);
            }
        }
        let accuracy = hits as f64 / total as f64;
        assert!((accuracy - noise).abs() < 0.02, "accuracy {accuracy}");
    }

    #[test]
    fn bad_specs_are_rejected() {
        let mut spec = DriftStreamSpec::inversion(10, 0.0, 1);
        spec.concept_b.rule = "spiral".into();
        assert!(matches!(generate_drift_stream(&spec, 10), Err(Error::Spec(_))));
        let spec = DriftStreamSpec::inversion(10, 0.5, 1);
        assert!(generate_drift_stream(&spec, 10).is_err());
        let spec = DriftStreamSpec::inversion(10, 0.0, 1);
        assert!(generate_drift_stream(&spec, 0).is_err());
    }
}
