//! Rendering of run reports as text, JSON and CSV.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::commands::Outcome;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub results: Vec<(&'static str, Option<f64>)>,
    pub verdicts: Vec<(&'static str, bool)>,
    pub runtime_s: f64,
}

impl RunReport {
    pub fn new(command: &str, outcome: Outcome, runtime_s: f64) -> Self {
        Self {
            command: command.to_string(),
            params: outcome.params,
            results: outcome.results,
            verdicts: outcome.verdicts,
            runtime_s,
        }
    }

    pub fn result(&self, name: &str) -> Option<f64> {
        self.results.iter().find(|r| r.0 == name).and_then(|r| r.1)
    }

    pub fn verdict(&self, name: &str) -> Option<bool> {
        self.verdicts.iter().find(|v| v.0 == name).map(|v| v.1)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Text => Ok(self.to_text()),
            Format::Json => Ok(self.to_json()),
            Format::Csv => self.to_csv(),
        }
    }

    /// `{"command", "params", "results", "runtime_s", "verdicts"}` with every
    /// map sorted by key and numbers at 17 significant digits.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{");
        let _ = write!(out, "\"command\":{}", json_string(&self.command));
        out.push_str(",\"params\":{");
        let params: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{}:{}", json_string(k), json_string(v)))
            .collect();
        out.push_str(&params.join(","));
        out.push_str("},\"results\":{");
        let results: BTreeMap<_, _> = self.results.iter().copied().collect();
        let results: Vec<String> = results
            .iter()
            .map(|(k, v)| format!("{}:{}", json_string(k), json_number(*v)))
            .collect();
        out.push_str(&results.join(","));
        let _ = write!(out, "}},\"runtime_s\":{:.6e}", self.runtime_s);
        out.push_str(",\"verdicts\":{");
        let verdicts: BTreeMap<_, _> = self.verdicts.iter().copied().collect();
        let verdicts: Vec<String> = verdicts
            .iter()
            .map(|(k, v)| format!("{}:{v}", json_string(k)))
            .collect();
        out.push_str(&verdicts.join(","));
        out.push_str("}}\n");
        out
    }

    /// Aligned `name  value` lines; each `<name>_paper` reference value is
    /// printed beside `<name>`.
    pub fn to_text(&self) -> String {
        let width = self
            .params
            .keys()
            .map(String::len)
            .chain(self.results.iter().map(|r| r.0.len()))
            .chain(self.verdicts.iter().map(|v| v.0.len()))
            .max()
            .unwrap_or(0);
        let mut out = format!("{}\n", self.command);
        if !self.params.is_empty() {
            out.push_str("params:\n");
            for (k, v) in &self.params {
                let _ = writeln!(out, "  {k:width$}  {v}");
            }
        }
        let references: BTreeMap<&str, Option<f64>> = self
            .results
            .iter()
            .filter_map(|(k, v)| k.strip_suffix("_paper").map(|base| (base, *v)))
            .collect();
        if !self.results.is_empty() {
            out.push_str("results:\n");
            for (k, v) in self.results.iter().filter(|r| !r.0.ends_with("_paper")) {
                let _ = write!(out, "  {k:width$}  {}", number(*v));
                if let Some(reference) = references.get(k) {
                    let _ = write!(out, "  (reference {})", number(*reference));
                }
                out.push('\n');
            }
        }
        if !self.verdicts.is_empty() {
            out.push_str("verdicts:\n");
            for (k, v) in &self.verdicts {
                let _ = writeln!(out, "  {k:width$}  {}", if *v { "VALID" } else { "INVALID" });
            }
        }
        let _ = writeln!(out, "runtime_s  {:.3}", self.runtime_s);
        out
    }

    /// One header row and one data row: parameters, results, verdicts.
    pub fn to_csv(&self) -> Result<String> {
        let mut header: Vec<&str> = self.params.keys().map(String::as_str).collect();
        header.extend(self.results.iter().map(|r| r.0));
        header.extend(self.verdicts.iter().map(|v| v.0));
        let mut row: Vec<String> = self.params.values().cloned().collect();
        row.extend(self.results.iter().map(|r| csv_number(r.1)));
        row.extend(self.verdicts.iter().map(|v| v.1.to_string()));
        write_csv(&header, std::iter::once(row))
    }
}

pub(crate) fn write_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let io_err = |e: csv::Error| Error::Io(e.to_string());
    writer.write_record(header).map_err(io_err)?;
    for row in rows {
        writer.write_record(&row).map_err(io_err)?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

/// 17 significant digits, `inf` for `+inf`.
pub fn number(v: Option<f64>) -> String {
    match v {
        None => "n/a".into(),
        Some(x) if x == f64::INFINITY => "inf".into(),
        Some(x) if x == f64::NEG_INFINITY => "-inf".into(),
        Some(x) => format!("{x:.16e}"),
    }
}

pub(crate) fn csv_number(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| number(Some(x)))
}

fn json_number(v: Option<f64>) -> String {
    match v {
        None => "null".into(),
        Some(x) if x.is_infinite() || x.is_nan() => json_string(&number(Some(x))),
        Some(x) => number(Some(x)),
    }
}

fn json_string(s: &str) -> String {
    serde_json::Value::String(s.to_string()).to_string()
}
