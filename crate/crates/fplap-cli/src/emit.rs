//! Deterministic serialization: JSON with lexicographic keys and
//! 17-significant-digit floats (round-trip exact), and RFC-4180-style
//! CSV with LF line endings.

use serde_json::Value;
use std::io::Write;

/// One output row of a sweep or evaluation.
#[derive(Debug, Clone)]
pub struct Row {
    pub x: f64,
    pub value: f64,
    pub err_est: f64,
    pub n_evals: u64,
    pub status: String,
}

pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        // only reachable from the CSV path: JSON numbers are always finite
        format!("{v}")
    }
}

/// Serialize a `serde_json::Value` with sorted object keys and floats
/// printed to 17 significant digits. Integers keep their plain form, so
/// parsing the output and re-serializing it reproduces the bytes.
pub fn write_json(out: &mut dyn Write, v: &Value, indent: usize) -> std::io::Result<()> {
    let pad = "  ".repeat(indent);
    let pad_in = "  ".repeat(indent + 1);
    match v {
        Value::Null => write!(out, "null"),
        Value::Bool(b) => write!(out, "{b}"),
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                write!(out, "{u}")
            } else if let Some(i) = n.as_i64() {
                write!(out, "{i}")
            } else {
                write!(out, "{}", fmt_f64(n.as_f64().unwrap()))
            }
        }
        Value::String(s) => write!(out, "{}", Value::String(s.clone())),
        Value::Array(items) => {
            if items.is_empty() {
                return write!(out, "[]");
            }
            writeln!(out, "[")?;
            for (i, item) in items.iter().enumerate() {
                write!(out, "{pad_in}")?;
                write_json(out, item, indent + 1)?;
                writeln!(out, "{}", if i + 1 < items.len() { "," } else { "" })?;
            }
            write!(out, "{pad}]")
        }
        Value::Object(map) => {
            if map.is_empty() {
                return write!(out, "{{}}");
            }
            // serde_json's default map is a BTreeMap, but sort defensively
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            writeln!(out, "{{")?;
            for (i, k) in keys.iter().enumerate() {
                write!(out, "{pad_in}{}: ", Value::String((*k).clone()))?;
                write_json(out, &map[*k], indent + 1)?;
                writeln!(out, "{}", if i + 1 < keys.len() { "," } else { "" })?;
            }
            write!(out, "{pad}}}")
        }
    }
}

pub fn json_bytes(v: &Value) -> Vec<u8> {
    let mut buf = Vec::new();
    write_json(&mut buf, v, 0).expect("writing to a Vec cannot fail");
    buf.push(b'\n');
    buf
}

/// CSV: mandatory header, one row per grid point, LF endings, '.'
/// decimal separator.
pub fn csv_bytes(rows: &[Row]) -> Vec<u8> {
    let mut buf = Vec::new();
    buf.extend_from_slice(b"x,value,err_est,n_evals,status\n");
    for r in rows {
        let line = format!(
            "{},{},{},{},{}\n",
            fmt_f64(r.x),
            fmt_f64(r.value),
            fmt_f64(r.err_est),
            r.n_evals,
            r.status
        );
        buf.extend_from_slice(line.as_bytes());
    }
    buf
}

pub fn rows_to_json(rows: &[Row]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| {
                serde_json::json!({
                    "x": r.x,
                    "value": r.value,
                    "err_est": r.err_est,
                    "n_evals": r.n_evals,
                    "status": r.status,
                })
            })
            .collect(),
    )
}
