//! Result tables: CSV with a fixed header or a JSON array of row objects.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::Format;
use crate::error::{CliError, Result};

pub const CSV_HEADER: [&str; 7] = [
    "experiment",
    "param_name",
    "param_value",
    "measured",
    "reference",
    "deviation",
    "seed",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub experiment: String,
    pub param_name: String,
    pub param_value: f64,
    pub measured: f64,
    pub reference: f64,
    /// `|measured − reference|`.
    pub deviation: f64,
    pub seed: u64,
}

impl ResultRow {
    pub fn new(
        experiment: impl Into<String>,
        param_name: impl Into<String>,
        param_value: f64,
        measured: f64,
        reference: f64,
        seed: u64,
    ) -> Self {
        Self {
            experiment: experiment.into(),
            param_name: param_name.into(),
            param_value,
            measured,
            reference,
            deviation: (measured - reference).abs(),
            seed,
        }
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_csv(rows: &[ResultRow]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fmt = |e: csv::Error| CliError::Format(e.to_string());
    w.write_record(CSV_HEADER).map_err(fmt)?;
    for r in rows {
        w.write_record([
            r.experiment.clone(),
            r.param_name.clone(),
            real(r.param_value),
            real(r.measured),
            real(r.reference),
            real(r.deviation),
            r.seed.to_string(),
        ])
        .map_err(fmt)?;
    }
    w.into_inner().map_err(|e| CliError::Format(e.to_string()))
}

pub fn to_json(rows: &[ResultRow]) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(rows).map_err(|e| CliError::Format(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

pub fn render(rows: &[ResultRow], format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Csv => to_csv(rows),
        Format::Json => to_json(rows),
    }
}

pub fn write_results(rows: &[ResultRow], path: &Path, format: Format) -> Result<()> {
    let bytes = render(rows, format)?;
    let mut file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    file.write_all(&bytes).map_err(|e| CliError::io(path, e))
}

pub fn parse_csv(bytes: &[u8]) -> Result<Vec<ResultRow>> {
    let mut reader = csv::Reader::from_reader(bytes);
    let header = reader.headers().map_err(|e| CliError::Format(e.to_string()))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(CliError::Format(format!("unexpected header {header:?}")));
    }
    reader
        .deserialize()
        .map(|r| r.map_err(|e: csv::Error| CliError::Format(e.to_string())))
        .collect()
}

pub fn parse_json(bytes: &[u8]) -> Result<Vec<ResultRow>> {
    serde_json::from_slice(bytes).map_err(|e| CliError::Format(e.to_string()))
}

pub fn read_results(path: &Path, format: Format) -> Result<Vec<ResultRow>> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    match format {
        Format::Csv => parse_csv(&bytes),
        Format::Json => parse_json(&bytes),
    }
}
