//! Result reports rendered as JSON, aligned text or CSV.

use std::io::{self, Write};

use clap::ValueEnum;
use nalgebra::DMatrix;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn fmt_float(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0.0".to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..15).contains(&mag) {
        format!("{:.*}", (16 - mag) as usize, x)
    } else {
        format!("{x:.16e}")
    }
}

pub fn float(x: f64) -> Value {
    if x.is_finite() {
        let n: Number = fmt_float(x).parse().expect("formatted float is valid JSON");
        Value::Number(n)
    } else {
        Value::Null
    }
}

pub fn floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| float(x)).collect())
}

pub fn matrix(m: &DMatrix<f64>) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| float(m[(i, j)])).collect()))
            .collect(),
    )
}

/// Ordered key/value report.
#[derive(Debug, Clone, Default)]
pub struct Report(Map<String, Value>);

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Self::default();
        r.str("command", command);
        r
    }

    pub fn put(&mut self, key: &str, value: Value) -> &mut Self {
        self.0.insert(key.to_string(), value);
        self
    }

    pub fn num(&mut self, key: &str, x: f64) -> &mut Self {
        self.put(key, float(x))
    }

    pub fn str(&mut self, key: &str, s: &str) -> &mut Self {
        self.put(key, Value::String(s.to_string()))
    }

    pub fn flag(&mut self, key: &str, b: bool) -> &mut Self {
        self.put(key, Value::Bool(b))
    }

    pub fn int(&mut self, key: &str, n: u64) -> &mut Self {
        self.put(key, Value::Number(n.into()))
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.0)?;
                writeln!(out)
            }
            Format::Text => {
                let width = self.0.keys().map(|k| k.len()).max().unwrap_or(0);
                for (k, v) in &self.0 {
                    write_text(out, k, v, width, 0)?;
                }
                Ok(())
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["key", "value"])?;
                for (k, v) in &self.0 {
                    flatten(&mut w, k, v)?;
                }
                w.flush()
            }
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "null".to_string(),
        other => other.to_string(),
    }
}

fn is_flat(v: &[Value]) -> bool {
    v.iter().all(|x| !x.is_array() && !x.is_object())
}

fn write_text(
    out: &mut impl Write,
    key: &str,
    v: &Value,
    width: usize,
    indent: usize,
) -> io::Result<()> {
    let pad = " ".repeat(indent);
    match v {
        Value::Array(items) if is_flat(items) => {
            let cells: Vec<String> = items.iter().map(scalar).collect();
            writeln!(out, "{pad}{key:<width$}  [{}]", cells.join(", "))
        }
        Value::Array(items) => {
            writeln!(out, "{pad}{key}:")?;
            for (i, item) in items.iter().enumerate() {
                match item {
                    Value::Array(row) if is_flat(row) => {
                        let cells: Vec<String> =
                            row.iter().map(|c| format!("{:>24}", scalar(c))).collect();
                        writeln!(out, "{pad}  {}", cells.join(" "))?;
                    }
                    other => write_text(out, &format!("[{i}]"), other, 0, indent + 2)?,
                }
            }
            Ok(())
        }
        Value::Object(map) => {
            writeln!(out, "{pad}{key}:")?;
            let w = map.keys().map(|k| k.len()).max().unwrap_or(0);
            for (k, v) in map {
                write_text(out, k, v, w, indent + 2)?;
            }
            Ok(())
        }
        other => writeln!(out, "{pad}{key:<width$}  {}", scalar(other)),
    }
}

fn flatten<W: Write>(w: &mut csv::Writer<W>, key: &str, v: &Value) -> io::Result<()> {
    match v {
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                flatten(w, &format!("{key}[{i}]"), item)?;
            }
            Ok(())
        }
        Value::Object(map) => {
            for (k, item) in map {
                flatten(w, &format!("{key}.{k}"), item)?;
            }
            Ok(())
        }
        other => Ok(w.write_record([key, &scalar(other)])?),
    }
}
