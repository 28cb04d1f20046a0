//! Table and report serialisation.

use std::io::Write;
use std::path::Path;

use dunkl_core::report::IdentityReport;
use serde_json::{Map, Value};

use crate::config::Format;
use crate::error::CliResult;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// 17 significant digits, so every double survives a round trip.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> CliResult<String> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(|c| match c {
                        Cell::Num(v) => fmt_f64(*v),
                        Cell::Text(s) => s.clone(),
                    }))?;
                }
                Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("CSV output is UTF-8"))
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(k, c)| {
                                let v = match c {
                                    Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
                                    Cell::Text(s) => Value::String(s.clone()),
                                };
                                (k.to_string(), v)
                            })
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                Ok(serde_json::to_string_pretty(&rows)? + "\n")
            }
        }
    }
}

/// Reports as a JSON array, or as CSV with a `suite`, `tolerance` and `pass`
/// column per report. `tolerance` returns `(suite, tolerance)` for a report.
pub fn render_reports(
    reports: &[IdentityReport],
    format: Format,
    tolerance: impl Fn(&IdentityReport) -> (String, f64),
) -> CliResult<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(reports)? + "\n"),
        Format::Csv => {
            let mut t = Table::new(vec![
                "suite", "name", "params", "grid", "max_abs_err", "max_rel_err", "elapsed_s", "tolerance", "pass",
            ]);
            for r in reports {
                let (suite, tol) = tolerance(r);
                t.push(vec![
                    suite.into(),
                    r.name.as_str().into(),
                    format_params(r).into(),
                    r.grid.as_str().into(),
                    r.max_abs_err.into(),
                    r.max_rel_err.into(),
                    r.elapsed_s.into(),
                    tol.into(),
                    if r.passes(tol) { "true" } else { "false" }.into(),
                ]);
            }
            t.render(Format::Csv)
        }
    }
}

pub fn format_params(r: &IdentityReport) -> String {
    r.params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

/// Writes `text` to `path`, or to standard output.
pub fn emit(text: &str, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}
