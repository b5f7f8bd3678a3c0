//! Run reports in JSON or CSV.
//!
//! Every numeric field except `wall_time_s` is a pure function of the
//! arguments, so two runs with the same flags print the same bytes apart
//! from that one field.

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::error::CliError;

pub const SCHEMA: &str = "mqi-report/1";
/// Frozen CSV columns. Bump the version in the first row when they change.
pub const CSV_VERSION: &str = "mqi-report-csv/1";
pub const CSV_COLUMNS: [&str; 9] =
    ["command", "seed", "row", "label", "quantity", "value", "verdict", "passed", "note"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn ordered<S: Serializer, V: Serialize>(pairs: &[(String, V)], s: S) -> Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(pairs.len()))?;
    for (k, v) in pairs {
        map.serialize_entry(k, v)?;
    }
    map.end()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub label: String,
    #[serde(serialize_with = "ordered")]
    pub values: Vec<(String, f64)>,
    pub verdict: Option<String>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Row {
    pub fn new(label: impl Into<String>, passed: bool) -> Row {
        Row { label: label.into(), values: Vec::new(), verdict: None, passed, note: None }
    }

    pub fn value(mut self, name: &str, v: f64) -> Row {
        self.values.push((name.to_string(), v));
        self
    }

    pub fn verdict(mut self, v: &str) -> Row {
        self.verdict = Some(v.to_string());
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Row {
        self.note = Some(n.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub command: String,
    pub seed: u64,
    #[serde(serialize_with = "ordered")]
    pub parameters: Vec<(String, String)>,
    pub rows: Vec<Row>,
    pub passed: bool,
    pub wall_time_s: f64,
}

impl RunReport {
    pub fn new(command: &str, seed: u64) -> RunReport {
        RunReport {
            schema: SCHEMA,
            command: command.to_string(),
            seed,
            parameters: Vec::new(),
            rows: Vec::new(),
            passed: true,
            wall_time_s: 0.0,
        }
    }

    pub fn param(&mut self, name: &str, value: impl ToString) {
        self.parameters.push((name.to_string(), value.to_string()));
    }

    pub fn param_f64(&mut self, name: &str, value: f64) {
        self.param(name, format_f64(value));
    }

    pub fn push(&mut self, row: Row) {
        self.passed &= row.passed;
        self.rows.push(row);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// Long format: one line per parameter and per value. The first line
    /// carries the schema version, the second the column names.
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        let err = |e: csv::Error| CliError::Failure(format!("csv: {e}"));
        w.write_record([CSV_VERSION]).map_err(err)?;
        w.write_record(CSV_COLUMNS).map_err(err)?;
        let seed = self.seed.to_string();
        for (name, value) in &self.parameters {
            w.write_record([&self.command, &seed, "param", "", name, value, "", "", ""]).map_err(err)?;
        }
        for (i, row) in self.rows.iter().enumerate() {
            let idx = i.to_string();
            let verdict = row.verdict.as_deref().unwrap_or("");
            let passed = row.passed.to_string();
            let note = row.note.as_deref().unwrap_or("");
            if row.values.is_empty() {
                w.write_record([&self.command, &seed, &idx, &row.label, "", "", verdict, &passed, note])
                    .map_err(err)?;
            }
            for (name, v) in &row.values {
                let v = format_f64(*v);
                w.write_record([&self.command, &seed, &idx, &row.label, name, &v, verdict, &passed, note])
                    .map_err(err)?;
            }
        }
        let overall = self.passed.to_string();
        w.write_record([&self.command, &seed, "total", "", "", "", "", &overall, ""]).map_err(err)?;
        let wall = format_f64(self.wall_time_s);
        w.write_record([&self.command, &seed, "wall_time_s", "", "", &wall, "", "", ""]).map_err(err)?;
        let bytes = w.into_inner().map_err(|e| CliError::Failure(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => Ok(self.to_json()),
            Format::Csv => self.to_csv(),
        }
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn format_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:?}")
    } else {
        x.to_string()
    }
}
