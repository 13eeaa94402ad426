//! CSV ingestion.
//!
//! Expected layout: a header row whose first column is `dmu`, with every
//! further column prefixed `i:` (input) or `o:` (output); one DMU per data
//! row, decimal-point numbers, UTF-8.

use crate::dataset::{DataError, Dataset, DmuRecord};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read '{path}': {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("csv parse error: {0}")]
    Csv(#[from] csv::Error),
    #[error("header must start with a 'dmu' column, found '{found}'")]
    MissingDmuColumn { found: String },
    #[error("header column '{column}' must be prefixed 'i:' or 'o:'")]
    BadHeaderColumn { column: String },
    #[error("header has no '{kind}' columns")]
    NoColumnsOfKind { kind: &'static str },
    #[error("row {row}, column '{column}': cannot parse '{value}' as a number")]
    BadNumber {
        row: usize,
        column: String,
        value: String,
    },
    #[error("row {row}: expected {expected} cells, found {found}")]
    ShortRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Data(#[from] DataError),
}

/// Loads and validates a dataset from a CSV file.
pub fn load_dataset(path: &Path, allow_negative: bool) -> Result<Dataset, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })?;
    parse_dataset_csv(&text, allow_negative)
}

/// Parses CSV text into a validated dataset.
pub fn parse_dataset_csv(text: &str, allow_negative: bool) -> Result<Dataset, IoError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let mut cols = headers.iter();
    match cols.next() {
        Some(first) if first.eq_ignore_ascii_case("dmu") => {}
        other => {
            return Err(IoError::MissingDmuColumn {
                found: other.unwrap_or("").to_string(),
            })
        }
    }
    // column kind per position (input = true), plus its label
    let mut layout: Vec<(bool, String)> = Vec::new();
    for col in cols {
        if let Some(label) = col.strip_prefix("i:") {
            layout.push((true, label.trim().to_string()));
        } else if let Some(label) = col.strip_prefix("o:") {
            layout.push((false, label.trim().to_string()));
        } else {
            return Err(IoError::BadHeaderColumn {
                column: col.to_string(),
            });
        }
    }
    let input_labels: Vec<String> = layout
        .iter()
        .filter(|(is_in, _)| *is_in)
        .map(|(_, l)| l.clone())
        .collect();
    let output_labels: Vec<String> = layout
        .iter()
        .filter(|(is_in, _)| !*is_in)
        .map(|(_, l)| l.clone())
        .collect();
    if input_labels.is_empty() {
        return Err(IoError::NoColumnsOfKind { kind: "i:" });
    }
    if output_labels.is_empty() {
        return Err(IoError::NoColumnsOfKind { kind: "o:" });
    }

    let mut records = Vec::new();
    for (idx, row) in reader.records().enumerate() {
        let row = row?;
        // header is line 1
        let line = idx + 2;
        if row.len() != layout.len() + 1 {
            return Err(IoError::ShortRow {
                row: line,
                expected: layout.len() + 1,
                found: row.len(),
            });
        }
        let name = row.get(0).unwrap_or("").to_string();
        let mut inputs = Vec::with_capacity(input_labels.len());
        let mut outputs = Vec::with_capacity(output_labels.len());
        for (k, (is_input, label)) in layout.iter().enumerate() {
            let cell = row.get(k + 1).unwrap_or("");
            let value: f64 = cell.parse().map_err(|_| IoError::BadNumber {
                row: line,
                column: label.clone(),
                value: cell.to_string(),
            })?;
            if *is_input {
                inputs.push(value);
            } else {
                outputs.push(value);
            }
        }
        records.push(DmuRecord::new(name, inputs, outputs));
    }
    Ok(Dataset::validate_labeled(
        records,
        allow_negative,
        input_labels,
        output_labels,
    )?)
}
