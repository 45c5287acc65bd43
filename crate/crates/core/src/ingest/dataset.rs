use std::collections::HashSet;
use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceFormat {
    Csv,
    Tsv,
    Json,
}

impl SourceFormat {
    /// Guess the format from a file extension (`.csv`, `.tsv`/`.tab`, `.json`).
    pub fn from_path(path: &Path) -> Option<Self> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "csv" => Some(Self::Csv),
            "tsv" | "tab" => Some(Self::Tsv),
            "json" => Some(Self::Json),
            _ => None,
        }
    }
}

impl std::str::FromStr for SourceFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "tsv" => Ok(Self::Tsv),
            "json" | "json-records" => Ok(Self::Json),
            other => Err(Error::Config(format!("unknown data format `{other}`"))),
        }
    }
}

/// An in-memory table of raw cell strings. Empty cells are kept as `""`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
    source_format: SourceFormat,
}

impl Dataset {
    pub fn new(columns: Vec<String>, rows: Vec<Vec<String>>, source_format: SourceFormat) -> Result<Self> {
        let columns: Vec<String> = columns.into_iter().map(|c| c.trim().to_string()).collect();
        let mut seen = HashSet::new();
        for c in &columns {
            if !seen.insert(c.as_str()) {
                return Err(Error::Format {
                    line: 1,
                    message: format!("duplicate column name `{c}`"),
                });
            }
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != columns.len() {
                return Err(Error::Format {
                    line: i + 2,
                    message: format!("expected {} fields, found {}", columns.len(), row.len()),
                });
            }
        }
        Ok(Self {
            columns,
            rows,
            source_format,
        })
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn source_format(&self) -> SourceFormat {
        self.source_format
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column_values(&self, index: usize) -> impl Iterator<Item = &str> + '_ {
        self.rows.iter().map(move |r| r[index].as_str())
    }
}

pub fn load_dataset_path(path: impl AsRef<Path>, format: Option<SourceFormat>) -> Result<Dataset> {
    let path = path.as_ref();
    let format = match format.or_else(|| SourceFormat::from_path(path)) {
        Some(f) => f,
        None => {
            return Err(Error::Config(format!(
                "cannot tell the format of {}; pass it explicitly",
                path.display()
            )))
        }
    };
    let file = File::open(path)?;
    load_dataset(BufReader::new(file), format)
}

pub fn load_dataset(mut source: impl Read, format: SourceFormat) -> Result<Dataset> {
    match format {
        SourceFormat::Csv => load_delimited(source, b',', format),
        SourceFormat::Tsv => load_delimited(source, b'\t', format),
        SourceFormat::Json => {
            let mut text = String::new();
            source.read_to_string(&mut text)?;
            load_json_records(&text)
        }
    }
}

fn load_delimited(source: impl Read, delimiter: u8, format: SourceFormat) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(true)
        .flexible(false)
        .from_reader(source);
    let columns: Vec<String> = reader
        .headers()
        .map_err(csv_error)?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        rows.push(record.iter().map(str::to_string).collect());
    }
    Dataset::new(columns, rows, format)
}

fn csv_error(err: csv::Error) -> Error {
    let line = err.position().map(|p| p.line() as usize).unwrap_or(0);
    match err.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => Error::Format {
            line,
            message: format!("expected {expected_len} fields, found {len}"),
        },
        other => Error::Format {
            line,
            message: format!("{other:?}"),
        },
    }
}

fn load_json_records(text: &str) -> Result<Dataset> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Format {
        line: e.line(),
        message: e.to_string(),
    })?;
    let records = value.as_array().ok_or_else(|| Error::Format {
        line: 1,
        message: "expected a top-level array of objects".into(),
    })?;
    let mut columns: Vec<String> = Vec::new();
    let mut rows = Vec::with_capacity(records.len());
    for (i, record) in records.iter().enumerate() {
        let obj = record.as_object().ok_or_else(|| Error::Format {
            line: i + 1,
            message: format!("record {i} is not an object"),
        })?;
        if i == 0 {
            columns = obj.keys().cloned().collect();
        } else if obj.len() != columns.len() || !columns.iter().all(|c| obj.contains_key(c)) {
            return Err(Error::Format {
                line: i + 1,
                message: format!("record {i} has different keys than record 0"),
            });
        }
        let mut row = Vec::with_capacity(columns.len());
        for c in &columns {
            row.push(match &obj[c] {
                serde_json::Value::Null => String::new(),
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(n) => n.to_string(),
                serde_json::Value::Bool(b) => b.to_string(),
                _ => {
                    return Err(Error::Format {
                        line: i + 1,
                        message: format!("record {i} field `{c}` is not a flat value"),
                    })
                }
            });
        }
        rows.push(row);
    }
    Dataset::new(columns, rows, SourceFormat::Json)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_csv() {
        let ds = load_dataset("a,b\n1,x\n2,y\n3,\n".as_bytes(), SourceFormat::Csv).unwrap();
        assert_eq!(ds.columns(), ["a", "b"]);
        assert_eq!(ds.len(), 3);
        assert_eq!(ds.rows()[2][1], "");
    }

    #[test]
    fn ragged_csv_names_line() {
        let err = load_dataset("a,b\n1,2\n3\n".as_bytes(), SourceFormat::Csv).unwrap_err();
        match err {
            Error::Format { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tsv_with_quotes() {
        let ds = load_dataset("name\tv\n\"a\tb\"\t1\n".as_bytes(), SourceFormat::Tsv).unwrap();
        assert_eq!(ds.rows()[0][0], "a\tb");
    }

    #[test]
    fn json_records_with_differing_keys_rejected() {
        let err = load_dataset(r#"[{"a":1,"b":2},{"a":3,"c":4}]"#.as_bytes(), SourceFormat::Json).unwrap_err();
        assert!(matches!(err, Error::Format { .. }));
    }

    #[test]
    fn json_records() {
        let ds = load_dataset(r#"[{"a":1,"b":"x"},{"b":null,"a":2.5}]"#.as_bytes(), SourceFormat::Json).unwrap();
        assert_eq!(ds.columns(), ["a", "b"]);
        assert_eq!(ds.rows()[1], vec!["2.5".to_string(), String::new()]);
    }

    #[test]
    fn duplicate_columns_after_trim() {
        let err = load_dataset("a, a\n1,2\n".as_bytes(), SourceFormat::Csv).unwrap_err();
        assert!(matches!(err, Error::Format { .. }));
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_dataset_path("/nonexistent/file.csv", None).unwrap_err();
        assert!(matches!(err, Error::Io(_)));
    }
}
