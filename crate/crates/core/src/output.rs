//! Tabular output as CSV or JSON.
//!
//! CSV: UTF-8, comma separated, LF line endings, exactly one header row.
//! JSON: one object `{"metadata": {...}, "rows": [...]}` with each row an
//! object keyed by column name. Exact rationals are written as `"num/den"`
//! strings next to a binary64 column, never as a float alone.

use std::fmt;

use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::exact::ExactProb;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
    Null,
}

impl Cell {
    pub fn ratio(r: &BigRational) -> Self {
        Cell::Text(format!("{}/{}", r.numer(), r.denom()))
    }

    pub fn prob(p: &ExactProb) -> Self {
        Cell::Text(p.to_string())
    }

    pub fn opt_float(x: Option<f64>) -> Self {
        x.map(Cell::Float).unwrap_or(Cell::Null)
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            // Non-finite floats have no JSON form.
            Cell::Float(x) if x.is_finite() => json!(x),
            Cell::Float(_) | Cell::Null => Value::Null,
            Cell::Bool(b) => json!(b),
            Cell::Text(s) => json!(s),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(i) => write!(f, "{i}"),
            Cell::Float(x) => write!(f, "{x}"),
            Cell::Bool(b) => write!(f, "{b}"),
            Cell::Text(s) => f.write_str(s),
            Cell::Null => Ok(()),
        }
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string()))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    pub fn to_json_rows(&self) -> Vec<Value> {
        self.rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .cloned()
                    .zip(row.iter().map(Cell::to_json))
                    .collect();
                Value::Object(obj)
            })
            .collect()
    }
}

/// Provenance attached to every JSON document.
#[derive(Debug, Clone, PartialEq)]
pub struct Metadata {
    pub command: String,
    pub parameters: Map<String, Value>,
    pub timestamp: String,
    /// Command-specific results that are not rows (maxima, distances, ...).
    pub summary: Map<String, Value>,
}

impl Metadata {
    pub fn new(command: &str, parameters: Map<String, Value>, timestamp: String) -> Self {
        Self {
            command: command.to_string(),
            parameters,
            timestamp,
            summary: Map::new(),
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "parameters": self.parameters,
            "timestamp": self.timestamp,
            "summary": self.summary,
        })
    }
}

pub fn to_json_document(table: &Table, meta: &Metadata) -> String {
    let doc = json!({
        "metadata": meta.to_json(),
        "rows": table.to_json_rows(),
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

pub fn render(table: &Table, meta: &Metadata, format: Format) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => to_json_document(table, meta),
    }
}
