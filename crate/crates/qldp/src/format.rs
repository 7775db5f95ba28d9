//! Channel and POVM JSON files.
//!
//! Channel: `{"dim": 2, "label": "...", "kraus": [M, ...]}`
//! POVM:    `{"dim": 2, "elements": [M, ...], "labels": ["0", ...]}`
//!
//! Each matrix `M` is an array of rows and each entry a `[re, im]` pair.

use std::fmt::Write as _;
use std::path::Path;

use qldp_core::{Complex, ComplexMatrix, KrausChannel, Povm, QldpError};
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field `{path}`: {message}")]
    Field { path: String, message: String },
    #[error("invalid {what}: {source}")]
    Invariant {
        what: &'static str,
        #[source]
        source: QldpError,
    },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn field(path: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Field {
        path: path.into(),
        message: message.into(),
    }
}

fn parse_value(text: &str) -> Result<Value, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn object<'a>(
    v: &'a Value,
    allowed: &[&str],
) -> Result<&'a serde_json::Map<String, Value>, FormatError> {
    let obj = v
        .as_object()
        .ok_or_else(|| field("$", "expected a JSON object"))?;
    if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(field(k.clone(), "unknown field"));
    }
    Ok(obj)
}

fn dim_field(obj: &serde_json::Map<String, Value>) -> Result<usize, FormatError> {
    let v = obj.get("dim").ok_or_else(|| field("dim", "missing"))?;
    match v.as_u64() {
        Some(d) if (1..=1 << 12).contains(&d) => Ok(d as usize),
        _ => Err(field("dim", format!("expected a positive integer, found {v}"))),
    }
}

fn number(v: &Value, path: &str) -> Result<f64, FormatError> {
    match v.as_f64() {
        Some(x) if x.is_finite() => Ok(x),
        _ => Err(field(path, format!("expected a finite number, found {v}"))),
    }
}

fn matrix(v: &Value, dim: usize, path: &str) -> Result<ComplexMatrix, FormatError> {
    let rows = v
        .as_array()
        .ok_or_else(|| field(path, "expected an array of rows"))?;
    if rows.len() != dim {
        return Err(field(path, format!("expected {dim} rows, found {}", rows.len())));
    }
    let mut data = Vec::with_capacity(dim * dim);
    for (i, row) in rows.iter().enumerate() {
        let rpath = format!("{path}[{i}]");
        let entries = row
            .as_array()
            .ok_or_else(|| field(&rpath, "expected an array of [re, im] entries"))?;
        if entries.len() != dim {
            return Err(field(&rpath, format!("expected {dim} entries, found {}", entries.len())));
        }
        for (j, e) in entries.iter().enumerate() {
            let epath = format!("{rpath}[{j}]");
            match e.as_array().map(Vec::as_slice) {
                Some([re, im]) => data.push(Complex::new(
                    number(re, &format!("{epath}[0]"))?,
                    number(im, &format!("{epath}[1]"))?,
                )),
                _ => return Err(field(&epath, format!("expected [re, im], found {e}"))),
            }
        }
    }
    ComplexMatrix::new(dim, dim, data).map_err(|source| FormatError::Invariant {
        what: "matrix",
        source,
    })
}

fn matrix_list(
    obj: &serde_json::Map<String, Value>,
    key: &str,
    dim: usize,
) -> Result<Vec<ComplexMatrix>, FormatError> {
    let list = obj
        .get(key)
        .ok_or_else(|| field(key, "missing"))?
        .as_array()
        .ok_or_else(|| field(key, "expected an array of matrices"))?;
    if list.is_empty() {
        return Err(field(key, "must not be empty"));
    }
    list.iter()
        .enumerate()
        .map(|(k, m)| matrix(m, dim, &format!("{key}[{k}]")))
        .collect()
}

pub fn parse_channel(text: &str) -> Result<KrausChannel, FormatError> {
    let v = parse_value(text)?;
    let obj = object(&v, &["dim", "label", "kraus"])?;
    let dim = dim_field(obj)?;
    let label = match obj.get("label") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(other) => return Err(field("label", format!("expected a string, found {other}"))),
    };
    let kraus = matrix_list(obj, "kraus", dim)?;
    KrausChannel::new(kraus, label).map_err(|source| FormatError::Invariant {
        what: "channel",
        source,
    })
}

pub fn parse_povm(text: &str) -> Result<Povm, FormatError> {
    let v = parse_value(text)?;
    let obj = object(&v, &["dim", "elements", "labels"])?;
    let dim = dim_field(obj)?;
    let elements = matrix_list(obj, "elements", dim)?;
    let labels = match obj.get("labels") {
        None | Some(Value::Null) => Vec::new(),
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, l)| {
                l.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| field(format!("labels[{i}]"), "expected a string"))
            })
            .collect::<Result<_, _>>()?,
        Some(other) => return Err(field("labels", format!("expected an array, found {other}"))),
    };
    Povm::new(elements, labels).map_err(|source| FormatError::Invariant { what: "POVM", source })
}

fn read(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_channel(path: &Path) -> Result<KrausChannel, FormatError> {
    parse_channel(&read(path)?)
}

pub fn read_povm(path: &Path) -> Result<Povm, FormatError> {
    parse_povm(&read(path)?)
}

fn json_number(x: f64) -> String {
    // shortest representation that parses back to the same f64
    serde_json::to_string(&x).expect("finite entry")
}

fn write_matrices(out: &mut String, key: &str, mats: &[ComplexMatrix]) {
    let _ = write!(out, "  \"{key}\": [");
    for (k, m) in mats.iter().enumerate() {
        out.push_str(if k == 0 { "\n    [" } else { ",\n    [" });
        for i in 0..m.rows() {
            if i > 0 {
                out.push_str(",\n     ");
            }
            out.push('[');
            for (j, z) in m.row(i).iter().enumerate() {
                if j > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "[{}, {}]", json_number(z.re), json_number(z.im));
            }
            out.push(']');
        }
        out.push(']');
    }
    out.push_str("\n  ]");
}

pub fn channel_to_json(channel: &KrausChannel) -> String {
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"dim\": {},", channel.dim());
    if let Some(label) = channel.label() {
        let _ = writeln!(out, "  \"label\": {},", Value::String(label.to_string()));
    }
    write_matrices(&mut out, "kraus", channel.kraus());
    out.push_str("\n}\n");
    out
}

pub fn povm_to_json(povm: &Povm) -> String {
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"dim\": {},", povm.dim());
    write_matrices(&mut out, "elements", povm.elements());
    let labels: Vec<Value> = povm.labels().iter().cloned().map(Value::String).collect();
    let _ = write!(out, ",\n  \"labels\": {}\n}}\n", Value::Array(labels));
    out
}
