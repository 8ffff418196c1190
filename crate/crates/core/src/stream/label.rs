use std::collections::HashMap;

use super::Schema;

/// Bijection between raw label strings and class indices.
///
/// A fixed map rejects labels it does not know; an auto map assigns the next
/// index to every new label in first-seen order.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelMap {
    index_to_raw: Vec<String>,
    raw_to_index: HashMap<String, usize>,
    auto: bool,
}

impl LabelMap {
    pub fn auto() -> Self {
        Self {
            index_to_raw: Vec::new(),
            raw_to_index: HashMap::new(),
            auto: true,
        }
    }

    pub fn fixed<S: AsRef<str>>(class_names: &[S]) -> Self {
        let mut map = Self::auto();
        for name in class_names {
            map.insert(name.as_ref());
        }
        map.auto = false;
        map
    }

    /// Fixed map in the schema's class order (plus its label aliases), or an
    /// auto map when the schema declares no classes.
    pub fn for_schema(schema: &Schema) -> Self {
        if schema.class_names().is_empty() {
            return Self::auto();
        }
        let mut map = Self::fixed(schema.class_names());
        for (alias, canonical) in schema.label_aliases() {
            if let Some(&index) = map.raw_to_index.get(canonical.as_str()) {
                map.raw_to_index.insert(alias.clone(), index);
            }
        }
        map
    }

    fn insert(&mut self, raw: &str) -> usize {
        let index = self.index_to_raw.len();
        self.index_to_raw.push(raw.to_string());
        self.raw_to_index.insert(raw.to_string(), index);
        index
    }

    /// Encodes a raw label (surrounding whitespace ignored).
    pub fn encode(&mut self, raw: &str) -> Option<usize> {
        let raw = raw.trim();
        match self.raw_to_index.get(raw) {
            Some(&index) => Some(index),
            None if self.auto => Some(self.insert(raw)),
            None => None,
        }
    }

    pub fn index_of(&self, raw: &str) -> Option<usize> {
        self.raw_to_index.get(raw.trim()).copied()
    }

    pub fn decode(&self, index: usize) -> Option<&str> {
        self.index_to_raw.get(index).map(String::as_str)
    }

    pub fn class_names(&self) -> &[String] {
        &self.index_to_raw
    }

    pub fn len(&self) -> usize {
        self.index_to_raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index_to_raw.is_empty()
    }

    pub fn is_auto(&self) -> bool {
        self.auto
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn auto_assigns_first_seen_order() {
        let mut map = LabelMap::auto();
        assert_eq!(map.encode("b"), Some(0));
        assert_eq!(map.encode("a"), Some(1));
        assert_eq!(map.encode(" b "), Some(0));
        assert_eq!(map.decode(1), Some("a"));
        assert_eq!(map.len(), 2);
    }

    #[test]
    fn fixed_rejects_unknown() {
        let mut map = LabelMap::fixed(&["x", "y"]);
        assert_eq!(map.encode("y"), Some(1));
        assert_eq!(map.encode("z"), None);
        assert_eq!(map.len(), 2);
    }

    #[test]
    fn schema_aliases_share_an_index() {
        let mut map = LabelMap::for_schema(&Schema::wsn_ds());
        assert_eq!(map.encode("TDMA"), Some(4));
        assert_eq!(map.encode("Scheduling"), Some(4));
        assert_eq!(map.encode("Normal"), Some(0));
        assert_eq!(map.class_names().len(), 5);
    }
}
