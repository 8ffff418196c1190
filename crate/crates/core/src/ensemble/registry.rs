use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    member_seed, AdaptiveRandomForest, ArfConfig, BagWeighting, OnlineBagging, VoteEnsemble,
    VoteMode, WeightedMajority,
};
use crate::error::{Error, Result};
use crate::learners::{
    Classifier, GaussianNb, LinearSvm, MajorityClass, NoChange, PassiveAggressive, Perceptron,
    SlidingWindowKnn, Standardized,
};
use crate::tree::{HoeffdingTree, LeafPrediction, TreeConfig};

/// Every model the harness can build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Nb,
    Knn,
    Perceptron,
    Pa,
    Svm,
    Ht,
    Hat,
    NoChange,
    MajorityClass,
    Ht10,
    Hat10,
    Arf10,
    Arf20,
    ArfHat,
    ArfNb,
    HatNb,
    Wm,
}

pub const MODEL_KEYS: [&str; 17] = [
    "nb",
    "knn",
    "perceptron",
    "pa",
    "svm",
    "ht",
    "hat",
    "no_change",
    "majority_class",
    "ht10",
    "hat10",
    "arf10",
    "arf20",
    "arf_hat",
    "arf_nb",
    "hat_nb",
    "wm",
];

const ALL: [ModelKind; 17] = [
    ModelKind::Nb,
    ModelKind::Knn,
    ModelKind::Perceptron,
    ModelKind::Pa,
    ModelKind::Svm,
    ModelKind::Ht,
    ModelKind::Hat,
    ModelKind::NoChange,
    ModelKind::MajorityClass,
    ModelKind::Ht10,
    ModelKind::Hat10,
    ModelKind::Arf10,
    ModelKind::Arf20,
    ModelKind::ArfHat,
    ModelKind::ArfNb,
    ModelKind::HatNb,
    ModelKind::Wm,
];

impl ModelKind {
    pub fn all() -> &'static [ModelKind] {
        &ALL
    }

    pub fn key(self) -> &'static str {
        MODEL_KEYS[ALL.iter().position(|&k| k == self).expect("listed")]
    }

    /// Display label used in reports and comparison tables.
    pub fn label(self) -> &'static str {
        match self {
            Self::Nb => "NB",
            Self::Knn => "KNN",
            Self::Perceptron => "Perceptron",
            Self::Pa => "PA",
            Self::Svm => "SVM",
            Self::Ht => "HT",
            Self::Hat => "HAT",
            Self::NoChange => "NoChange",
            Self::MajorityClass => "MajorityClass",
            Self::Ht10 => "HT(10)",
            Self::Hat10 => "HAT(10)",
            Self::Arf10 => "ARF(10)",
            Self::Arf20 => "ARF(20)",
            Self::ArfHat => "ARF + HAT",
            Self::ArfNb => "ARF + NB",
            Self::HatNb => "HAT + NB",
            Self::Wm => "WM",
        }
    }

    /// Single learners compared individually.
    pub fn individual() -> [ModelKind; 7] {
        [
            Self::Svm,
            Self::Knn,
            Self::Nb,
            Self::Pa,
            Self::Perceptron,
            Self::Ht,
            Self::Hat,
        ]
    }

    pub fn homogeneous() -> [ModelKind; 4] {
        [Self::Ht10, Self::Hat10, Self::Arf10, Self::Arf20]
    }

    pub fn heterogeneous() -> [ModelKind; 3] {
        [Self::ArfHat, Self::ArfNb, Self::HatNb]
    }

    /// The full comparison roster: individual, homogeneous, heterogeneous.
    pub fn roster() -> Vec<ModelKind> {
        let mut all = Self::individual().to_vec();
        all.extend(Self::homogeneous());
        all.extend(Self::heterogeneous());
        all
    }

    /// Looks up an ensemble by its display label; spacing, case and member
    /// order of two-member pairs do not matter (`"HAT+ARF"` is `ArfHat`).
    pub fn from_label(label: &str) -> Result<Self> {
        let key: String = label
            .chars()
            .filter(|c| !c.is_whitespace())
            .flat_map(char::to_uppercase)
            .collect();
        let kind = match key.as_str() {
            "HT(10)" => Self::Ht10,
            "HAT(10)" => Self::Hat10,
            "ARF(10)" => Self::Arf10,
            "ARF(20)" => Self::Arf20,
            "ARF+HAT" | "HAT+ARF" => Self::ArfHat,
            "ARF+NB" | "NB+ARF" => Self::ArfNb,
            "HAT+NB" | "NB+HAT" => Self::HatNb,
            _ => {
                return Err(Error::Config(format!(
                    "unknown ensemble `{label}`; expected one of HT(10), HAT(10), ARF(10), ARF(20), ARF + HAT, ARF + NB, HAT + NB"
                )))
            }
        };
        Ok(kind)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(i) = MODEL_KEYS.iter().position(|&k| k == s) {
            return Ok(ALL[i]);
        }
        let nearest = MODEL_KEYS
            .iter()
            .min_by_key(|k| strsim::levenshtein(k, s))
            .expect("non-empty registry");
        Err(Error::Config(format!(
            "unknown model `{s}` (did you mean `{nearest}`?); valid models: {}",
            MODEL_KEYS.join(", ")
        )))
    }
}

/// Hyperparameters for every model; unspecified fields take the defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Hyperparams {
    pub knn_k: usize,
    pub knn_window: usize,
    /// Standardize inputs of KNN and the linear models.
    pub standardize: bool,
    pub learning_rate: f64,
    pub svm_lambda: f64,
    pub pa_c: f64,
    pub variance_floor: f64,
    pub grace_period: usize,
    pub split_confidence: f64,
    pub tie_threshold: f64,
    pub n_thresholds: usize,
    pub leaf_prediction: LeafPrediction,
    pub hat_delta: f64,
    pub bag_size: usize,
    pub bag_lambda: f64,
    pub arf_lambda: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arf_max_features: Option<usize>,
    pub arf_warning_delta: f64,
    pub arf_drift_delta: f64,
    pub arf_grace_period: usize,
    pub arf_split_confidence: f64,
    pub vote: VoteMode,
    pub wm_beta: f64,
    pub wm_experts: Vec<ModelKind>,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Self {
            knn_k: SlidingWindowKnn::DEFAULT_K,
            knn_window: SlidingWindowKnn::DEFAULT_WINDOW,
            standardize: true,
            learning_rate: 0.1,
            svm_lambda: 1e-4,
            pa_c: 1.0,
            variance_floor: GaussianNb::DEFAULT_VARIANCE_FLOOR,
            grace_period: 200,
            split_confidence: 1e-7,
            tie_threshold: 0.05,
            n_thresholds: 10,
            leaf_prediction: LeafPrediction::Adaptive,
            hat_delta: crate::drift::DEFAULT_DELTA,
            bag_size: 10,
            bag_lambda: 1.0,
            arf_lambda: 6.0,
            arf_max_features: None,
            arf_warning_delta: 0.01,
            arf_drift_delta: 0.001,
            arf_grace_period: 50,
            arf_split_confidence: 0.01,
            vote: VoteMode::Soft,
            wm_beta: WeightedMajority::DEFAULT_BETA,
            wm_experts: vec![ModelKind::Nb, ModelKind::Ht, ModelKind::Hat],
        }
    }
}

impl Hyperparams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("knn_k", self.knn_k),
            ("knn_window", self.knn_window),
            ("bag_size", self.bag_size),
            ("n_thresholds", self.n_thresholds),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(Error::Config(format!("`{name}` must be positive")));
            }
        }
        let unit = [
            ("split_confidence", self.split_confidence),
            ("hat_delta", self.hat_delta),
            ("arf_warning_delta", self.arf_warning_delta),
            ("arf_drift_delta", self.arf_drift_delta),
            ("arf_split_confidence", self.arf_split_confidence),
            ("wm_beta", self.wm_beta),
        ];
        for (name, v) in unit {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Config(format!("`{name}` must lie in (0, 1), got {v}")));
            }
        }
        if !(self.bag_lambda > 0.0 && self.arf_lambda > 0.0) {
            return Err(Error::Config("Poisson rates must be positive".into()));
        }
        if self.arf_max_features == Some(0) {
            return Err(Error::Config("`arf_max_features` must be positive".into()));
        }
        if self.wm_experts.is_empty() || self.wm_experts.contains(&ModelKind::Wm) {
            return Err(Error::Config(
                "`wm_experts` must be non-empty and cannot contain `wm`".into(),
            ));
        }
        Ok(())
    }

    pub fn tree_config(&self, adaptive: bool) -> TreeConfig {
        TreeConfig {
            grace_period: self.grace_period,
            split_confidence: self.split_confidence,
            tie_threshold: self.tie_threshold,
            n_thresholds: self.n_thresholds,
            variance_floor: self.variance_floor,
            leaf_prediction: self.leaf_prediction,
            drift_delta: adaptive.then_some(self.hat_delta),
            max_features: None,
        }
    }

    pub fn arf_config(&self, n_members: usize) -> ArfConfig {
        ArfConfig {
            n_members,
            lambda: self.arf_lambda,
            max_features: self.arf_max_features,
            warning_delta: self.arf_warning_delta,
            drift_delta: self.arf_drift_delta,
            tree: TreeConfig {
                grace_period: self.arf_grace_period,
                split_confidence: self.arf_split_confidence,
                ..self.tree_config(false)
            },
        }
    }
}

fn scaled<M: Classifier + 'static>(model: M, n_features: usize, on: bool) -> Box<dyn Classifier> {
    if on {
        Box::new(Standardized::new(model, n_features))
    } else {
        Box::new(model)
    }
}

/// Builds a fresh, untrained model.
pub fn build_model(
    kind: ModelKind,
    params: &Hyperparams,
    n_features: usize,
    n_classes: usize,
    seed: u64,
) -> Result<Box<dyn Classifier>> {
    params.validate()?;
    if n_classes == 0 || n_features == 0 {
        return Err(Error::Config("models need at least one feature and one class".into()));
    }
    let p = params;
    let f = n_features;
    let c = n_classes;
    let std = p.standardize;
    let model: Box<dyn Classifier> = match kind {
        ModelKind::Nb => Box::new(GaussianNb::with_variance_floor(f, c, p.variance_floor)),
        ModelKind::Knn => scaled(SlidingWindowKnn::new(c, p.knn_k, p.knn_window), f, std),
        ModelKind::Perceptron => scaled(Perceptron::new(f, c, p.learning_rate), f, std),
        ModelKind::Pa => scaled(PassiveAggressive::new(f, c, p.pa_c), f, std),
        ModelKind::Svm => scaled(LinearSvm::new(f, c, p.learning_rate, p.svm_lambda), f, std),
        ModelKind::Ht => Box::new(HoeffdingTree::new(f, c, p.tree_config(false))),
        ModelKind::Hat => Box::new(HoeffdingTree::new(f, c, p.tree_config(true))),
        ModelKind::NoChange => Box::new(NoChange::new(c)),
        ModelKind::MajorityClass => Box::new(MajorityClass::new(c)),
        ModelKind::Ht10 | ModelKind::Hat10 => {
            let adaptive = kind == ModelKind::Hat10;
            let members = (0..p.bag_size)
                .map(|_| Box::new(HoeffdingTree::new(f, c, p.tree_config(adaptive))) as Box<dyn Classifier>)
                .collect();
            Box::new(OnlineBagging::new(members, BagWeighting::Poisson(p.bag_lambda), seed))
        }
        ModelKind::Arf10 => Box::new(AdaptiveRandomForest::new(f, c, p.arf_config(10), seed)),
        ModelKind::Arf20 => Box::new(AdaptiveRandomForest::new(f, c, p.arf_config(20), seed)),
        ModelKind::ArfHat | ModelKind::ArfNb | ModelKind::HatNb => {
            let pair = match kind {
                ModelKind::ArfHat => [ModelKind::Arf10, ModelKind::Hat],
                ModelKind::ArfNb => [ModelKind::Arf10, ModelKind::Nb],
                _ => [ModelKind::Hat, ModelKind::Nb],
            };
            let members = pair
                .iter()
                .enumerate()
                .map(|(i, &k)| build_model(k, p, f, c, member_seed(seed, i)))
                .collect::<Result<Vec<_>>>()?;
            Box::new(VoteEnsemble::new(members, p.vote))
        }
        ModelKind::Wm => {
            let experts = p
                .wm_experts
                .iter()
                .enumerate()
                .map(|(i, &k)| build_model(k, p, f, c, member_seed(seed, i)))
                .collect::<Result<Vec<_>>>()?;
            Box::new(WeightedMajority::new(experts, p.wm_beta))
        }
    };
    Ok(model)
}

/// One of the seven comparison ensembles (`"HT(10)"`, `"ARF + HAT"`, ...)
/// with default hyperparameters.
pub fn build_named_ensemble(
    label: &str,
    n_features: usize,
    n_classes: usize,
    seed: u64,
) -> Result<Box<dyn Classifier>> {
    let kind = ModelKind::from_label(label)?;
    build_model(kind, &Hyperparams::default(), n_features, n_classes, seed)
}
