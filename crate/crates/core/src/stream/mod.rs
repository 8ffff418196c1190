//! Instances, dataset schema, label encoding and instance streams.

mod csv_stream;
mod label;
mod schema;
mod synth;

pub use csv_stream::{open_csv_stream, CsvStream};
pub use label::LabelMap;
pub use schema::{Schema, WSN_DS_CLASSES, WSN_DS_FEATURES, WSN_DS_LABEL};
pub use synth::{generate_drift_stream, Concept, DriftStream, DriftStreamSpec};

use serde::{Deserialize, Serialize};

/// One labeled observation of the stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub features: Vec<f64>,
    pub label: usize,
    pub sequence_number: u64,
}

impl Instance {
    pub fn new(features: Vec<f64>, label: usize, sequence_number: u64) -> Self {
        Self {
            features,
            label,
            sequence_number,
        }
    }
}
