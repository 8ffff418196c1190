use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ensemble::{Hyperparams, ModelKind};
use crate::error::{Error, Result};
use crate::stream::Schema;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    pub path: PathBuf,
    /// Named schema; only `wsn-ds` is built in. Ignored when `features` is set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    /// Inline schema: feature columns in any order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub features: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_column: Option<String>,
    #[serde(default)]
    pub drop_columns: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub name: String,
    #[serde(default)]
    pub params: Hyperparams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_window")]
    pub window: usize,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Defaults to the model name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run_label: Option<String>,
    /// Class treated as negative in the attack-vs-normal collapse; defaults
    /// to the first class.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal_class: Option<String>,
    /// Models run by `--suite`; defaults to the 14-model comparison roster.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<Vec<String>>,
    pub dataset: DatasetConfig,
    pub model: ModelConfig,
}

fn default_seed() -> u64 {
    42
}

fn default_window() -> usize {
    1000
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("results")
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.model_kind()?;
        self.model.params.validate()?;
        if self.window == 0 {
            return Err(Error::Config("`window` must be positive".into()));
        }
        check_label(&self.run_label())?;
        self.suite_models()?;
        let schema = self.schema()?;
        self.normal_index(&schema)?;
        Ok(())
    }

    pub fn model_kind(&self) -> Result<ModelKind> {
        self.model.name.parse()
    }

    pub fn run_label(&self) -> String {
        self.run_label.clone().unwrap_or_else(|| self.model.name.clone())
    }

    pub fn suite_models(&self) -> Result<Vec<ModelKind>> {
        match &self.suite {
            None => Ok(ModelKind::roster()),
            Some(names) if names.is_empty() => Err(Error::Config("`suite` lists no models".into())),
            Some(names) => names.iter().map(|n| n.parse()).collect(),
        }
    }

    pub fn schema(&self) -> Result<Schema> {
        let d = &self.dataset;
        let schema = match (&d.features, d.schema.as_deref()) {
            (Some(features), _) => {
                let label = d.label_column.clone().ok_or_else(|| {
                    Error::Config("inline schemas need `dataset.label_column`".into())
                })?;
                let classes = d
                    .classes
                    .clone()
                    .filter(|c| !c.is_empty())
                    .ok_or_else(|| Error::Config("inline schemas need `dataset.classes`".into()))?;
                Schema::new(features.clone(), label, classes)?
            }
            (None, Some("wsn-ds")) | (None, None) => {
                if d.label_column.is_some() || d.classes.is_some() {
                    return Err(Error::Config(
                        "`label_column` and `classes` only apply to inline schemas".into(),
                    ));
                }
                Schema::wsn_ds()
            }
            (None, Some(other)) => {
                return Err(Error::Config(format!(
                    "unknown schema `{other}`; use `wsn-ds` or list `features` inline"
                )))
            }
        };
        schema.without(&d.drop_columns)
    }

    pub fn normal_index(&self, schema: &Schema) -> Result<usize> {
        match &self.normal_class {
            None => Ok(0),
            Some(name) => schema
                .class_names()
                .iter()
                .position(|c| c == name)
                .ok_or_else(|| Error::Config(format!("normal class `{name}` is not a listed class"))),
        }
    }
}

fn check_label(label: &str) -> Result<()> {
    if label.is_empty() || label == "." || label == ".." || label.contains(['/', '\\']) {
        return Err(Error::Config(format!(
            "run_label `{label}` must be a plain file name"
        )));
    }
    Ok(())
}
