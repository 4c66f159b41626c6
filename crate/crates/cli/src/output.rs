use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fmt::Write;

use crate::config::{canonical_json, Scenario};
use crate::run::RunOutput;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn config_hash(scenario: &Scenario) -> String {
    hex::encode(Sha256::digest(canonical_json(scenario).as_bytes()))
}

pub fn render(scenario: &Scenario, out: &RunOutput, format: Format) -> String {
    match format {
        Format::Csv => to_csv(scenario, out),
        Format::Json => to_json(scenario, out),
    }
}

pub fn to_csv(scenario: &Scenario, out: &RunOutput) -> String {
    let mut s = String::new();
    writeln!(s, "# superrad {VERSION}").unwrap();
    if let Some(name) = &scenario.name {
        writeln!(s, "# scenario: {name}").unwrap();
    }
    writeln!(s, "# config_sha256: {}", config_hash(scenario)).unwrap();
    for note in &out.notes {
        writeln!(s, "# note: {note}").unwrap();
    }
    s.push_str("param");
    for c in &out.columns {
        s.push(',');
        s.push_str(c);
    }
    s.push('\n');
    for (p, row) in out.params.iter().zip(&out.rows) {
        write!(s, "{p}").unwrap();
        for v in row {
            write!(s, ",{v}").unwrap();
        }
        s.push('\n');
    }
    s
}

#[derive(Serialize)]
struct JsonTable<'a> {
    version: &'a str,
    scenario: Option<&'a str>,
    config_sha256: String,
    notes: &'a [String],
    columns: Vec<&'a str>,
    rows: Vec<Vec<f64>>,
}

pub fn to_json(scenario: &Scenario, out: &RunOutput) -> String {
    let table = JsonTable {
        version: VERSION,
        scenario: scenario.name.as_deref(),
        config_sha256: config_hash(scenario),
        notes: &out.notes,
        columns: std::iter::once("param").chain(out.columns.iter().map(String::as_str)).collect(),
        rows: out
            .params
            .iter()
            .zip(&out.rows)
            .map(|(&p, r)| std::iter::once(p).chain(r.iter().copied()).collect())
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&table).expect("table serialises");
    s.push('\n');
    s
}
