use std::collections::BTreeSet;

use clap::ValueEnum;
use serde_json::{json, Value};

use crate::commands::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => json_output(report),
        Format::Csv => csv_output(report),
        Format::Text => text_output(report),
    }
}

fn status(report: &Report) -> &'static str {
    if report.passed {
        "PASS"
    } else {
        "FAIL"
    }
}

fn json_output(report: &Report) -> String {
    let doc = json!({
        "command": report.command,
        "params": report.params,
        "results": report.results,
        "status": status(report),
    });
    let mut out = serde_json::to_string_pretty(&doc).expect("json values always serialize");
    out.push('\n');
    out
}

/// Scalars print bare, arrays of scalars space-separated; nested objects are dropped.
fn cell(value: &Value) -> Option<String> {
    match value {
        Value::Null => Some(String::new()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) => items
            .iter()
            .map(|v| match v {
                Value::Array(_) | Value::Object(_) => None,
                other => cell(other),
            })
            .collect::<Option<Vec<_>>>()
            .map(|parts| parts.join(" ")),
        Value::Object(_) => None,
    }
}

fn columns(report: &Report) -> Vec<String> {
    let mut keys = BTreeSet::new();
    for row in &report.results {
        if let Value::Object(map) = row {
            for (k, v) in map {
                if cell(v).is_some() {
                    keys.insert(k.clone());
                }
            }
        }
    }
    keys.into_iter().collect()
}

fn csv_output(report: &Report) -> String {
    let cols = columns(report);
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(&cols).expect("writing to memory");
    for row in &report.results {
        let record: Vec<String> = cols.iter().map(|c| row.get(c).and_then(cell).unwrap_or_default()).collect();
        writer.write_record(&record).expect("writing to memory");
    }
    let bytes = writer.into_inner().expect("flushing to memory");
    String::from_utf8(bytes).expect("csv of utf-8 cells is utf-8")
}

fn text_output(report: &Report) -> String {
    let cols = columns(report);
    let mut out = format!("{} {}\n", report.command, report.params);
    for row in &report.results {
        let fields: Vec<String> = cols
            .iter()
            .filter_map(|c| row.get(c).and_then(cell).filter(|s| !s.is_empty()).map(|s| format!("{c}={s}")))
            .collect();
        out.push_str("  ");
        out.push_str(&fields.join("  "));
        out.push('\n');
    }
    out.push_str(status(report));
    out.push('\n');
    out
}
