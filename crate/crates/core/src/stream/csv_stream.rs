use std::fs::File;
use std::io::Read;
use std::path::Path;

use super::schema::ColumnRole;
use super::{Instance, LabelMap, Schema};
use crate::error::{Error, Result};

/// Pull-based reader that turns CSV rows into [`Instance`]s in file order.
pub struct CsvStream<R: Read> {
    reader: csv::Reader<R>,
    record: csv::StringRecord,
    /// File column of each schema feature.
    feature_columns: Vec<usize>,
    feature_names: Vec<String>,
    label_column: usize,
    labels: LabelMap,
    next_sequence: u64,
    finished: bool,
}

/// Opens a CSV file whose header must name every schema column.
pub fn open_csv_stream(
    path: impl AsRef<Path>,
    schema: &Schema,
    labels: LabelMap,
) -> Result<CsvStream<File>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    CsvStream::from_reader(file, schema, labels)
}

impl<R: Read> CsvStream<R> {
    pub fn from_reader(source: R, schema: &Schema, labels: LabelMap) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(source);
        let headers = reader
            .headers()
            .map_err(|e| Error::Read {
                row: 0,
                message: e.to_string(),
            })?
            .clone();

        let mut feature_columns = vec![None; schema.feature_count()];
        let mut label_column = None;
        for (column, name) in headers.iter().enumerate() {
            match schema.canonical_column(name) {
                Some(ColumnRole::Feature(j)) => {
                    if feature_columns[j].replace(column).is_some() {
                        return Err(Error::Schema(format!("column `{name}` appears twice")));
                    }
                }
                Some(ColumnRole::Label) => {
                    if label_column.replace(column).is_some() {
                        return Err(Error::Schema(format!("column `{name}` appears twice")));
                    }
                }
                Some(ColumnRole::Ignored) => {}
                None => {
                    return Err(Error::Schema(format!(
                        "unexpected column `{name}` in header"
                    )))
                }
            }
        }
        let label_column = label_column.ok_or_else(|| {
            Error::Schema(format!(
                "label column `{}` missing from header",
                schema.label_column()
            ))
        })?;
        let feature_columns = feature_columns
            .into_iter()
            .zip(schema.feature_names())
            .map(|(column, name)| {
                column.ok_or_else(|| Error::Schema(format!("column `{name}` missing from header")))
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(Self {
            reader,
            record: csv::StringRecord::new(),
            feature_columns,
            feature_names: schema.feature_names().to_vec(),
            label_column,
            labels,
            next_sequence: 0,
            finished: false,
        })
    }

    /// Next instance, or `Ok(None)` once the stream is exhausted (and on every
    /// call after that).
    pub fn next_instance(&mut self) -> Result<Option<Instance>> {
        if self.finished {
            return Ok(None);
        }
        let row = self.next_sequence as usize + 1;
        let more = match self.reader.read_record(&mut self.record) {
            Ok(more) => more,
            Err(e) => {
                self.finished = true;
                return Err(Error::Read {
                    row,
                    message: e.to_string(),
                });
            }
        };
        if !more {
            self.finished = true;
            return Ok(None);
        }

        let mut features = Vec::with_capacity(self.feature_columns.len());
        for (&column, name) in self.feature_columns.iter().zip(&self.feature_names) {
            let cell = self.record.get(column).unwrap_or("");
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => features.push(v),
                _ => {
                    self.finished = true;
                    return Err(Error::Parse {
                        row,
                        column: name.clone(),
                        value: cell.to_string(),
                    });
                }
            }
        }
        let raw = self.record.get(self.label_column).unwrap_or("");
        let Some(label) = self.labels.encode(raw) else {
            self.finished = true;
            return Err(Error::Encoding {
                row,
                label: raw.to_string(),
            });
        };

        let instance = Instance::new(features, label, self.next_sequence);
        self.next_sequence += 1;
        Ok(Some(instance))
    }

    pub fn label_map(&self) -> &LabelMap {
        &self.labels
    }

    pub fn into_label_map(self) -> LabelMap {
        self.labels
    }
}

impl<R: Read> Iterator for CsvStream<R> {
    type Item = Result<Instance>;

    fn next(&mut self) -> Option<Self::Item> {
        self.next_instance().transpose()
    }
}
