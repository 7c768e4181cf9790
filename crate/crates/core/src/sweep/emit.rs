// SPDX-License-Identifier: Apache-2.0

//! CSV and JSON serialization of result rows.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde_json::{Map, Number, Value};

use super::ResultRow;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::InvalidSpec(format!("unknown format `{s}`"))),
        }
    }
}

/// Rounds to 12 significant digits.
fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Decimal text of `x` at 12 significant digits.
pub fn format_value(x: f64) -> String {
    let r = round12(x);
    if r.is_nan() {
        return "NaN".into();
    }
    if r.is_infinite() {
        return if r > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if r != 0.0 && (r.abs() < 1e-6 || r.abs() >= 1e15) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

fn io_err(path: &str, e: impl std::fmt::Display) -> Error {
    Error::Io {
        path: path.to_string(),
        message: e.to_string(),
    }
}

fn header(rows: &[ResultRow]) -> Result<Vec<String>> {
    let first = rows
        .first()
        .ok_or_else(|| Error::InvalidSpec("no rows to write".into()))?;
    let cols = first.columns();
    if rows.iter().any(|r| r.columns() != cols) {
        return Err(Error::InvalidSpec("rows have differing columns".into()));
    }
    Ok(cols)
}

fn write_csv<W: Write>(rows: &[ResultRow], out: W, path: &str) -> Result<()> {
    let cols = header(rows)?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(&cols).map_err(|e| io_err(path, e))?;
    for r in rows {
        let record = r
            .axes
            .iter()
            .map(|(_, v)| format_value(*v))
            .chain(r.values.iter().map(|(_, v)| v.map(format_value).unwrap_or_default()))
            .chain(std::iter::once(r.flags_joined()));
        w.write_record(record).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

fn number(x: f64) -> Value {
    Number::from_f64(round12(x)).map(Value::Number).unwrap_or(Value::Null)
}

fn write_json<W: Write>(rows: &[ResultRow], mut out: W, path: &str) -> Result<()> {
    header(rows)?;
    let array: Vec<Value> = rows
        .iter()
        .map(|r| {
            let mut obj = Map::new();
            for (n, v) in &r.axes {
                obj.insert(n.clone(), number(*v));
            }
            for (o, v) in &r.values {
                obj.insert(o.as_str().to_string(), v.map(number).unwrap_or(Value::Null));
            }
            let flags = r.flags.iter().map(|f| Value::String(f.as_str().to_string())).collect();
            obj.insert("flags".into(), Value::Array(flags));
            Value::Object(obj)
        })
        .collect();
    serde_json::to_writer_pretty(&mut out, &array).map_err(|e| io_err(path, e))?;
    out.write_all(b"\n").map_err(|e| io_err(path, e))?;
    out.flush().map_err(|e| io_err(path, e))
}

/// Serializes rows to any writer; `label` names the sink in errors.
pub fn write_rows<W: Write>(rows: &[ResultRow], format: OutputFormat, out: W, label: &str) -> Result<()> {
    match format {
        OutputFormat::Csv => write_csv(rows, out, label),
        OutputFormat::Json => write_json(rows, out, label),
    }
}

/// Writes rows to `path`.
pub fn emit(rows: &[ResultRow], format: OutputFormat, path: &Path) -> Result<()> {
    let label = path.display().to_string();
    let file = File::create(path).map_err(|e| io_err(&label, e))?;
    write_rows(rows, format, BufWriter::new(file), &label)
}
