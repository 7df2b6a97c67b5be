//! Tables rendered as CSV or JSON. Rationals print as `p/q`; floats as the
//! shortest decimal that round-trips, so output bytes depend only on values.

use std::fs;
use std::io::Write;
use std::path::Path;

use cfree_core::limit_laws::Atom;
use cfree_core::{rational, Rational};
use serde_json::{json, Map, Value};

use crate::args::Format;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// Exact integer, kept as its decimal string.
    Int(String),
    Rat(Rational),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    pub fn int(v: impl std::fmt::Display) -> Cell {
        Cell::Int(v.to_string())
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(s) => s.clone(),
            Cell::Rat(q) => rational::format(q),
            Cell::Float(x) => format_f64(*x),
            Cell::Text(s) => csv_quote(s),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // Counts and rationals can exceed f64; keep them as strings.
            Cell::Int(s) => s.parse::<i64>().map(Value::from).unwrap_or_else(|_| Value::String(s.clone())),
            Cell::Rat(q) => Value::String(rational::format(q)),
            Cell::Float(x) => json_f64(*x),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
        }
    }
}

/// Shortest round-trip decimal; `inf`, `-inf`, `NaN` for non-finite values.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 {
        // Avoid a distinct "-0.0" row for values that are zero by symmetry.
        return "0.0".into();
    }
    format!("{x:?}")
}

fn json_f64(x: f64) -> Value {
    if x == 0.0 {
        return json!(0.0);
    }
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json_value(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let mut obj = Map::new();
                    for (k, c) in self.header.iter().zip(row) {
                        obj.insert((*k).to_string(), c.json());
                    }
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => render_json(&self.to_json_value()),
        }
    }
}

pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values are serializable");
    s.push('\n');
    s
}

/// `{"atoms":[{"location":x,"weight":w}]}`, atoms in increasing location.
pub fn atoms_json(atoms: &[Atom]) -> String {
    let list: Vec<Value> = atoms
        .iter()
        .map(|a| json!({ "location": json_f64(a.location), "weight": json_f64(a.weight) }))
        .collect();
    let mut s = serde_json::to_string(&json!({ "atoms": list })).expect("values are serializable");
    s.push('\n');
    s
}

/// Writes `text` to `path`, or to standard output when `path` is `None`.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io { path: p.to_path_buf(), source: e }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io { path: "<stdout>".into(), source: e })
        }
    }
}
