use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `counts[actual][predicted]` over `C` classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    counts: Vec<Vec<u64>>,
    total: u64,
}

/// Attack-vs-normal collapse; attacks are the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryCounts {
    pub tp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub fp: u64,
    pub tn: u64,
}

impl BinaryCounts {
    pub fn total(&self) -> u64 {
        self.tp + self.fn_ + self.fp + self.tn
    }
}

impl ConfusionMatrix {
    pub fn new(n_classes: usize) -> Self {
        Self {
            counts: vec![vec![0; n_classes]; n_classes],
            total: 0,
        }
    }

    /// Batch tally of an `(actual, predicted)` log.
    pub fn from_log(n_classes: usize, log: &[(usize, usize)]) -> Result<Self> {
        let mut cm = Self::new(n_classes);
        for &(a, p) in log {
            cm.update(a, p)?;
        }
        Ok(cm)
    }

    pub fn n_classes(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn get(&self, actual: usize, predicted: usize) -> u64 {
        self.counts[actual][predicted]
    }

    pub fn update(&mut self, actual: usize, predicted: usize) -> Result<()> {
        let n = self.n_classes();
        if actual >= n || predicted >= n {
            return Err(Error::Domain(format!(
                "class index out of range: actual {actual}, predicted {predicted}, {n} classes"
            )));
        }
        self.counts[actual][predicted] += 1;
        self.total += 1;
        Ok(())
    }

    pub fn correct(&self) -> u64 {
        (0..self.n_classes()).map(|c| self.counts[c][c]).sum()
    }

    /// Any attack predicted as any attack counts as a true positive.
    pub fn binary_collapse(&self, normal_class: usize) -> Result<BinaryCounts> {
        let n = self.n_classes();
        if normal_class >= n {
            return Err(Error::Domain(format!(
                "normal class {normal_class} out of range for {n} classes"
            )));
        }
        let mut b = BinaryCounts::default();
        for (a, row) in self.counts.iter().enumerate() {
            for (p, &v) in row.iter().enumerate() {
                match (a == normal_class, p == normal_class) {
                    (false, false) => b.tp += v,
                    (false, true) => b.fn_ += v,
                    (true, false) => b.fp += v,
                    (true, true) => b.tn += v,
                }
            }
        }
        Ok(b)
    }

    /// One-vs-rest counts for class `c`.
    pub fn one_vs_rest(&self, c: usize) -> BinaryCounts {
        let tp = self.counts[c][c];
        let row: u64 = self.counts[c].iter().sum();
        let col: u64 = self.counts.iter().map(|r| r[c]).sum();
        BinaryCounts {
            tp,
            fn_: row - tp,
            fp: col - tp,
            tn: self.total + tp - row - col,
        }
    }
}
