//! Rendering of command results as CSV or JSON.
//!
//! Every number is carried as a decimal string, so both formats are exact
//! for rationals and digit-exact for floating values.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::Format;
use crate::manifest::RunManifest;

/// A rectangular table of string cells.
#[derive(Clone, Debug)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Everything a command produces, before formatting.
#[derive(Clone, Debug)]
pub struct Report {
    pub table: Table,
    /// Named scalar results, in emission order.
    pub estimates: Vec<(String, String)>,
    /// Trailing CSV row after the table body, e.g. the limit estimate.
    pub footer: Option<Vec<String>>,
    /// Set when a check ran to completion but did not pass.
    pub failure: Option<String>,
}

impl Report {
    pub fn new(table: Table) -> Self {
        Report {
            table,
            estimates: Vec::new(),
            footer: None,
            failure: None,
        }
    }

    pub fn estimate(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.estimates.push((key.into(), value.into()));
    }
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    command: &'a str,
    params: Map<String, Value>,
    values: Vec<Map<String, Value>>,
    estimates: Map<String, Value>,
    manifest: &'a RunManifest,
}

fn string_map<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Map<String, Value> {
    pairs
        .into_iter()
        .map(|(k, v)| (k.to_owned(), Value::String(v.to_owned())))
        .collect()
}

pub fn render(report: &Report, format: Format, manifest: &RunManifest) -> String {
    match format {
        Format::Csv => render_csv(report),
        Format::Json => render_json(report, manifest),
    }
}

fn render_csv(report: &Report) -> String {
    let mut out = String::new();
    let mut line = |cells: &[String]| {
        out.push_str(&cells.join(","));
        out.push('\n');
    };
    let header: Vec<String> = report.table.columns.iter().map(|c| c.to_string()).collect();
    line(&header);
    for row in &report.table.rows {
        line(row);
    }
    if let Some(footer) = &report.footer {
        line(footer);
    }
    out
}

fn render_json(report: &Report, manifest: &RunManifest) -> String {
    let values = report
        .table
        .rows
        .iter()
        .map(|row| {
            string_map(
                report
                    .table
                    .columns
                    .iter()
                    .copied()
                    .zip(row.iter().map(String::as_str)),
            )
        })
        .collect();
    let doc = JsonDocument {
        command: &manifest.command,
        params: string_map(
            manifest
                .params
                .iter()
                .map(|(k, v)| (k.as_str(), v.as_str())),
        ),
        values,
        estimates: string_map(
            report
                .estimates
                .iter()
                .map(|(k, v)| (k.as_str(), v.as_str())),
        ),
        manifest,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("JSON serialization of strings");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> (Report, RunManifest) {
        let mut t = Table::new(&["n", "numerator", "denominator"]);
        t.push(vec!["0".into(), "2".into(), "1".into()]);
        t.push(vec!["1".into(), "7".into(), "3".into()]);
        let mut r = Report::new(t);
        r.estimate("limit_estimate", "1.77");
        r.footer = Some(vec!["limit_estimate".into(), "1.77".into(), "-0.5".into()]);
        let m = RunManifest::new("gamma-approx", [("alpha".into(), "1/2".into())].into(), 64);
        (r, m)
    }

    #[test]
    fn csv_layout() {
        let (r, m) = sample();
        let s = render(&r, Format::Csv, &m);
        assert_eq!(
            s,
            "n,numerator,denominator\n0,2,1\n1,7,3\nlimit_estimate,1.77,-0.5\n"
        );
    }

    #[test]
    fn json_layout() {
        let (r, m) = sample();
        let v: Value = serde_json::from_str(&render(&r, Format::Json, &m)).unwrap();
        assert_eq!(v["command"], "gamma-approx");
        assert_eq!(v["params"]["alpha"], "1/2");
        assert_eq!(v["values"][1]["numerator"], "7");
        assert_eq!(v["estimates"]["limit_estimate"], "1.77");
        assert_eq!(v["manifest"]["precision_bits"], 64);
    }
}
