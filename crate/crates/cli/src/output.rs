//! Report envelope and rendering.
//!
//! Floats are written with 17 significant digits so they read back to the
//! same `f64`; non-finite values become `null` (JSON) or an empty cell (CSV).

use serde_json::{json, Map, Number, Value};

use crate::input::InputDigest;

pub const TOOL: &str = "gradhooke";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Round-trip safe rendering of a float. Negative zero prints as zero.
pub fn fmt_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

/// A JSON number with 17 significant digits, or `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(fmt_f64(x).parse::<Number>().expect("formatted float is a JSON number"))
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|x| num(*x)).collect())
}

pub fn matrix<const N: usize>(rows: &[[f64; N]]) -> Value {
    Value::Array(rows.iter().map(|r| nums(r)).collect())
}

pub fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

/// A table for plot-ready CSV output.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Float(f64),
    Int(i64),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Float(x) if x.is_finite() => fmt_f64(*x),
            Cell::Float(_) => String::new(),
            Cell::Int(i) => i.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    /// Arguments after the program name.
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub seed: Option<u64>,
    pub status: String,
    pub results: Value,
    pub diagnostics: Value,
    /// CSV layout; `None` flattens the results to `key,value` rows.
    pub table: Option<Table>,
    pub exit_code: i32,
}

impl RunReport {
    pub fn to_json(&self) -> Value {
        let inputs: Vec<Value> =
            self.inputs.iter().map(|d| json!({ "role": d.role, "path": d.path, "sha256": d.sha256 })).collect();
        json!({
            "tool": TOOL,
            "version": VERSION,
            "command": self.command,
            "inputs": inputs,
            "seed": self.seed,
            "status": self.status,
            "results": self.results,
            "diagnostics": self.diagnostics,
        })
    }

    pub fn to_json_bytes(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(&self.to_json()).expect("report serializes");
        out.push(b'\n');
        out
    }

    pub fn to_csv_bytes(&self) -> Vec<u8> {
        let table = self.table.clone().unwrap_or_else(|| flat_table(&self.results));
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&table.header).expect("in-memory write");
        for row in &table.rows {
            w.write_record(row.iter().map(Cell::render)).expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }
}

/// `key,value` rows with dotted keys; array elements are indexed.
pub fn flat_table(v: &Value) -> Table {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    Table { header: vec!["key".into(), "value".into()], rows }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<Vec<Cell>>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                flatten(&key(k), v, rows);
            }
        }
        Value::Array(a) => {
            for (i, v) in a.iter().enumerate() {
                flatten(&key(&i.to_string()), v, rows);
            }
        }
        Value::Null => rows.push(vec![Cell::Text(prefix.into()), Cell::Text(String::new())]),
        Value::Number(n) => rows.push(vec![Cell::Text(prefix.into()), Cell::Text(n.to_string())]),
        Value::Bool(b) => rows.push(vec![Cell::Text(prefix.into()), Cell::Text(b.to_string())]),
        Value::String(s) => rows.push(vec![Cell::Text(prefix.into()), Cell::Text(s.clone())]),
    }
}

/// Builds an object from `(key, value)` pairs.
pub fn object<const N: usize>(pairs: [(&str, Value); N]) -> Value {
    Value::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}
