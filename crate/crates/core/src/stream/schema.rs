use crate::error::{Error, Result};

/// Column layout of a labeled CSV dataset.
///
/// Header names are matched case-insensitively with spaces and underscores
/// ignored, so ` who CH` in a file matches `Who_CH` here.
#[derive(Debug, Clone, PartialEq)]
pub struct Schema {
    feature_names: Vec<String>,
    label_column: String,
    class_names: Vec<String>,
    /// `(name as it may appear in a file, canonical feature or label name)`.
    column_aliases: Vec<(String, String)>,
    /// `(raw label in a file, canonical class name)`.
    label_aliases: Vec<(String, String)>,
    /// File columns that are present but not used.
    ignored_columns: Vec<String>,
}

/// Predictive features of WSN-DS, in file order.
pub const WSN_DS_FEATURES: [&str; 18] = [
    "id",
    "Time",
    "Is_CH",
    "Who_CH",
    "Dist_To_CH",
    "ADV_S",
    "ADV_R",
    "JOIN_S",
    "JOIN_R",
    "SCH_S",
    "SCH_R",
    "Rank",
    "DATA_S",
    "DATA_R",
    "Data_Sent_To_BS",
    "dist_CH_To_BS",
    "send_code",
    "Consumed_Energy",
];

/// Canonical reporting order of the WSN-DS classes.
pub const WSN_DS_CLASSES: [&str; 5] = ["Normal", "Blackhole", "Grayhole", "Flooding", "Scheduling"];

pub const WSN_DS_LABEL: &str = "Attack type";

pub(crate) fn normalize_name(name: &str) -> String {
    name.chars()
        .filter(|c| c.is_alphanumeric())
        .flat_map(char::to_lowercase)
        .collect()
}

impl Schema {
    /// Builds a schema. An empty `class_names` means labels are encoded in
    /// first-seen order.
    pub fn new(
        feature_names: Vec<String>,
        label_column: impl Into<String>,
        class_names: Vec<String>,
    ) -> Result<Self> {
        let schema = Self {
            feature_names,
            label_column: label_column.into(),
            class_names,
            column_aliases: Vec::new(),
            label_aliases: Vec::new(),
            ignored_columns: Vec::new(),
        };
        schema.validate()?;
        Ok(schema)
    }

    /// The published WSN-DS file: 18 numeric features plus `Attack type`.
    ///
    /// The public CSV spells the energy column `Expaned Energy` and labels
    /// scheduling attacks `TDMA`; both are accepted as aliases.
    pub fn wsn_ds() -> Self {
        let mut schema = Self::new(
            WSN_DS_FEATURES.iter().map(|s| s.to_string()).collect(),
            WSN_DS_LABEL,
            WSN_DS_CLASSES.iter().map(|s| s.to_string()).collect(),
        )
        .expect("built-in schema is valid");
        schema.column_aliases = vec![
            ("Expaned Energy".into(), "Consumed_Energy".into()),
            ("Expanded Energy".into(), "Consumed_Energy".into()),
        ];
        schema.label_aliases = vec![("TDMA".into(), "Scheduling".into())];
        schema
    }

    pub fn with_column_alias(mut self, alias: impl Into<String>, canonical: impl Into<String>) -> Self {
        self.column_aliases.push((alias.into(), canonical.into()));
        self
    }

    pub fn with_label_alias(mut self, alias: impl Into<String>, canonical: impl Into<String>) -> Self {
        self.label_aliases.push((alias.into(), canonical.into()));
        self
    }

    /// Removes the named features. They may still appear in the file and
    /// are skipped on ingestion.
    pub fn without(mut self, drop_columns: &[String]) -> Result<Self> {
        for column in drop_columns {
            let key = normalize_name(column);
            let position = self
                .feature_names
                .iter()
                .position(|f| normalize_name(f) == key)
                .ok_or_else(|| Error::Schema(format!("cannot drop unknown feature `{column}`")))?;
            let removed = self.feature_names.remove(position);
            self.ignored_columns.push(removed);
        }
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if self.feature_names.is_empty() {
            return Err(Error::Schema("at least one feature is required".into()));
        }
        let label_key = normalize_name(&self.label_column);
        let mut seen = std::collections::HashSet::new();
        for name in &self.feature_names {
            let key = normalize_name(name);
            if key == label_key {
                return Err(Error::Schema(format!(
                    "label column `{}` is also listed as a feature",
                    self.label_column
                )));
            }
            if !seen.insert(key) {
                return Err(Error::Schema(format!("duplicate feature `{name}`")));
            }
        }
        let mut classes = std::collections::HashSet::new();
        for class in &self.class_names {
            if !classes.insert(class.as_str()) {
                return Err(Error::Schema(format!("duplicate class `{class}`")));
            }
        }
        Ok(())
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn feature_count(&self) -> usize {
        self.feature_names.len()
    }

    pub fn label_column(&self) -> &str {
        &self.label_column
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn label_aliases(&self) -> &[(String, String)] {
        &self.label_aliases
    }

    /// Resolves a file header cell to a canonical schema column name.
    pub(crate) fn canonical_column(&self, header: &str) -> Option<ColumnRole> {
        let mut key = normalize_name(header);
        if let Some((_, canonical)) = self
            .column_aliases
            .iter()
            .find(|(alias, _)| normalize_name(alias) == key)
        {
            key = normalize_name(canonical);
        }
        if key == normalize_name(&self.label_column) {
            return Some(ColumnRole::Label);
        }
        if let Some(j) = self.feature_names.iter().position(|f| normalize_name(f) == key) {
            return Some(ColumnRole::Feature(j));
        }
        if self.ignored_columns.iter().any(|c| normalize_name(c) == key) {
            return Some(ColumnRole::Ignored);
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ColumnRole {
    Feature(usize),
    Label,
    Ignored,
}
