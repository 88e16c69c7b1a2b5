//! Stable output formats for generated suites: a JSON document with a fixed
//! key order, RFC-quoted CSV, and an aligned text table for humans. Tests
//! are emitted with value names so downstream runners can consume them
//! without knowing the internal index encoding.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generator::GeneratedSuite;
use crate::oracle::OracleReport;
use crate::parser::ModelFile;

/// Top-level JSON document. Field order is the wire order.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteDocument {
    pub parameters: Vec<String>,
    pub strength: usize,
    pub seed: u64,
    pub size: usize,
    pub tests: Vec<Vec<String>>,
    pub stats: StatsDocument,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationDocument>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StatsDocument {
    pub coverable_tuples: usize,
    pub initial_size: usize,
    pub improve_iterations: u64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationDocument {
    pub pass: bool,
    pub coverable_tuples: usize,
    pub covered_tuples: usize,
    pub missing_tuples: Vec<String>,
    pub invalid_rows: Vec<InvalidRowDocument>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InvalidRowDocument {
    pub row: usize,
    pub clause: String,
}

/// Rows of a suite as value names, in parameter order.
pub fn named_rows(model: &ModelFile, suite: &GeneratedSuite) -> Vec<Vec<String>> {
    let space = model.space();
    suite
        .rows
        .iter()
        .map(|tc| {
            tc.values()
                .iter()
                .enumerate()
                .map(|(p, &v)| space.value_name(p, v).to_string())
                .collect()
        })
        .collect()
}

/// Assembles the JSON document, optionally embedding an oracle report.
pub fn suite_document(
    model: &ModelFile,
    suite: &GeneratedSuite,
    report: Option<&OracleReport>,
) -> SuiteDocument {
    let space = model.space();
    SuiteDocument {
        parameters: space.parameter_names().map(str::to_string).collect(),
        strength: suite.strength,
        seed: suite.seed,
        size: suite.rows.len(),
        tests: named_rows(model, suite),
        stats: StatsDocument {
            coverable_tuples: suite.stats.coverable_tuples,
            initial_size: suite.stats.initial_size,
            improve_iterations: suite.stats.improve_iterations,
        },
        verification: report.map(|r| VerificationDocument {
            pass: r.passes(),
            coverable_tuples: r.coverable_tuple_count,
            covered_tuples: r.covered_tuple_count,
            missing_tuples: r
                .missing_tuples
                .iter()
                .map(|t| t.render(space))
                .collect(),
            invalid_rows: r
                .invalid_rows
                .iter()
                .map(|(row, clause)| InvalidRowDocument {
                    row: *row,
                    clause: clause.clone(),
                })
                .collect(),
        }),
    }
}

/// Pretty JSON with a trailing newline; byte-stable for fixed inputs.
pub fn to_json(doc: &SuiteDocument) -> Result<String> {
    let mut text = serde_json::to_string_pretty(doc)
        .map_err(|e| Error::InvalidModel(format!("JSON serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// CSV: header of parameter names, one record per test case.
pub fn to_csv(model: &ModelFile, suite: &GeneratedSuite) -> Result<String> {
    fn csv_err(e: impl std::fmt::Display) -> Error {
        Error::InvalidModel(format!("CSV serialization failed: {e}"))
    }
    let space = model.space();
    let mut writer = csv::Writer::from_writer(Vec::new());
    let header: Vec<&str> = space.parameter_names().collect();
    writer.write_record(&header).map_err(csv_err)?;
    for row in named_rows(model, suite) {
        writer.write_record(&row).map_err(csv_err)?;
    }
    let bytes = writer.into_inner().map_err(csv_err)?;
    String::from_utf8(bytes).map_err(csv_err)
}

/// Aligned table plus a summary footer; meant for terminals, not parsing.
pub fn to_text(model: &ModelFile, suite: &GeneratedSuite) -> String {
    let space = model.space();
    let header: Vec<String> = space.parameter_names().map(str::to_string).collect();
    let rows = named_rows(model, suite);
    let widths: Vec<usize> = header
        .iter()
        .enumerate()
        .map(|(i, h)| {
            rows.iter()
                .map(|r| r[i].len())
                .chain(std::iter::once(h.len()))
                .max()
                .unwrap()
        })
        .collect();
    let mut out = String::new();
    let emit_row = |out: &mut String, cells: &[String]| {
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            out.push_str(&format!("{:<width$}", cell, width = widths[i]));
        }
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    };
    emit_row(&mut out, &header);
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    emit_row(&mut out, &rule);
    for row in &rows {
        emit_row(&mut out, row);
    }
    out.push('\n');
    out.push_str(&format!(
        "size: {}  strength: {}  seed: {}\n",
        suite.rows.len(),
        suite.strength,
        suite.seed
    ));
    out
}
