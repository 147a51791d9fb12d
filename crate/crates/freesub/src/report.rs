//! Validation reports shared by the Monte Carlo harness and the command line.

use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub name: String,
    /// A float, an exact `"p/q"` string, or an integer count.
    pub value: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bound: Option<f64>,
    pub pass: bool,
}

impl Metric {
    /// `value ≤ bound`.
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Metric { name: name.into(), value: float(value), bound: Some(bound), pass: value <= bound }
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Metric { name: name.into(), value: serde_json::Value::Bool(ok), bound: None, pass: ok }
    }

    pub fn info(name: impl Into<String>, value: serde_json::Value) -> Self {
        Metric { name: name.into(), value, bound: None, pass: true }
    }

    pub fn exact(name: impl Into<String>, value: String, pass: bool) -> Self {
        Metric { name: name.into(), value: serde_json::Value::String(value), bound: None, pass }
    }
}

fn float(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(x).map(serde_json::Value::Number).unwrap_or_else(|| serde_json::Value::String(x.to_string()))
}

/// Column-major CSV payload: fixed header order, one row per grid point.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    /// Non-finite entries are written as `null`.
    #[serde(deserialize_with = "rows_with_nulls")]
    pub rows: Vec<Vec<f64>>,
}

fn rows_with_nulls<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<Vec<f64>>, D::Error> {
    let raw: Vec<Vec<Option<f64>>> = Deserialize::deserialize(d)?;
    Ok(raw.into_iter().map(|r| r.into_iter().map(|x| x.unwrap_or(f64::NAN)).collect()).collect())
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns)?;
        let mut buf = ryu::Buffer::new();
        for row in &self.rows {
            out.write_record(row.iter().map(|x| if x.is_finite() { buf.format(*x).to_string() } else { x.to_string() }))?;
        }
        out.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub check_name: String,
    /// The statement being checked, in words.
    pub paper_ref: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub metrics: Vec<Metric>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub table: Option<Table>,
    pub pass: bool,
}

impl ValidationReport {
    /// `pass` is the conjunction of the metric verdicts.
    pub fn new(check_name: impl Into<String>, paper_ref: impl Into<String>, seed: Option<u64>, metrics: Vec<Metric>, table: Option<Table>) -> Self {
        let pass = metrics.iter().all(|m| m.pass);
        ValidationReport { check_name: check_name.into(), paper_ref: paper_ref.into(), seed, metrics, table, pass }
    }

    pub fn metric(&self, name: &str) -> Option<&Metric> {
        self.metrics.iter().find(|m| m.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}
