use std::str::FromStr;

use super::{argmax, uniform, Classifier};
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    NoChange,
    MajorityClass,
}

impl FromStr for BaselineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "no_change" => Ok(Self::NoChange),
            "majority_class" => Ok(Self::MajorityClass),
            other => Err(Error::Config(format!(
                "unknown baseline `{other}` (expected no_change or majority_class)"
            ))),
        }
    }
}

/// Predicts the previous instance's label.
#[derive(Debug, Clone)]
pub struct NoChange {
    last: Option<usize>,
    n_classes: usize,
}

impl NoChange {
    pub fn new(n_classes: usize) -> Self {
        Self {
            last: None,
            n_classes,
        }
    }
}

impl Classifier for NoChange {
    fn n_classes(&self) -> usize {
        self.n_classes
    }

    fn learn_one(&mut self, _x: &[f64], y: usize) {
        self.last = Some(y);
    }

    fn predict_proba(&self, _x: &[f64]) -> Vec<f64> {
        match self.last {
            Some(y) => {
                let mut p = vec![0.0; self.n_classes];
                p[y] = 1.0;
                p
            }
            None => uniform(self.n_classes),
        }
    }
}

/// Predicts the most frequent label seen so far.
#[derive(Debug, Clone)]
pub struct MajorityClass {
    counts: Vec<f64>,
}

impl MajorityClass {
    pub fn new(n_classes: usize) -> Self {
        Self {
            counts: vec![0.0; n_classes],
        }
    }
}

impl Classifier for MajorityClass {
    fn n_classes(&self) -> usize {
        self.counts.len()
    }

    fn learn_one(&mut self, _x: &[f64], y: usize) {
        self.counts[y] += 1.0;
    }

    fn predict_proba(&self, _x: &[f64]) -> Vec<f64> {
        super::normalize(self.counts.clone())
    }

    fn predict_one(&self, _x: &[f64]) -> usize {
        argmax(&self.counts)
    }
}
