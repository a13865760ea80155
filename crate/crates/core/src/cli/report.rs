//! Report envelope, JSON with tagged non-finite numbers, and CSV tables.

use crate::error::{Error, Result};
use serde::Serialize;
use serde_json::{Map, Number, Value};

pub const SCHEMA: &str = "numrange/1";

/// Serializes through an intermediate tree that keeps NaN and ±∞, which are
/// then written as the strings "nan", "inf" and "-inf". Map keys come out sorted.
pub fn to_json<T: Serialize>(v: &T) -> Result<Value> {
    let tree = serde_value::to_value(v).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(convert(tree))
}

fn float(x: f64) -> Value {
    if x.is_nan() {
        Value::from("nan")
    } else if x == f64::INFINITY {
        Value::from("inf")
    } else if x == f64::NEG_INFINITY {
        Value::from("-inf")
    } else {
        Number::from_f64(x).map(Value::Number).expect("finite")
    }
}

fn key(v: serde_value::Value) -> String {
    match convert(v) {
        Value::String(s) => s,
        other => other.to_string(),
    }
}

fn convert(v: serde_value::Value) -> Value {
    use serde_value::Value as V;
    match v {
        V::Bool(b) => Value::Bool(b),
        V::U8(x) => x.into(),
        V::U16(x) => x.into(),
        V::U32(x) => x.into(),
        V::U64(x) => x.into(),
        V::I8(x) => x.into(),
        V::I16(x) => x.into(),
        V::I32(x) => x.into(),
        V::I64(x) => x.into(),
        V::F32(x) => float(x as f64),
        V::F64(x) => float(x),
        V::Char(c) => Value::String(c.to_string()),
        V::String(s) => Value::String(s),
        V::Unit => Value::Null,
        V::Option(o) => o.map_or(Value::Null, |b| convert(*b)),
        V::Newtype(b) => convert(*b),
        V::Seq(s) => Value::Array(s.into_iter().map(convert).collect()),
        V::Map(m) => Value::Object(m.into_iter().map(|(k, v)| (key(k), convert(v))).collect::<Map<_, _>>()),
        V::Bytes(b) => Value::Array(b.into_iter().map(Value::from).collect()),
    }
}

/// Formats a number for CSV with the same tags as the JSON output.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:e}")
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Flat rows for CSV output.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e.to_string()));
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
        Ok(String::from_utf8(bytes).expect("CSV of UTF-8 fields"))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct OracleUsage {
    pub samples: usize,
    pub refine_iters: usize,
}

impl OracleUsage {
    pub fn add(&mut self, samples: usize, refine_iters: usize) {
        self.samples += samples;
        self.refine_iters += refine_iters;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub all_passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Envelope {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub config: Value,
    pub oracle: Value,
    pub results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<Summary>,
}

impl Envelope {
    pub fn render(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(&to_json(self)?).map_err(|e| Error::Parse(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}
