//! Flat result records rendered as CSV or JSON.

use qldp_core::{Complex, Leakage};
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
    Amplitudes(Vec<Complex>),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
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

impl From<Leakage> for Cell {
    fn from(v: Leakage) -> Self {
        Cell::Num(v.as_f64())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// `%.9g`: 9 significant digits, trailing zeros dropped, exponent form
/// outside [1e-4, 1e9).
pub fn format_g9(x: f64) -> String {
    const DIGITS: i32 = 9;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format_g9(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => csv_quote(s),
            Cell::Empty => String::new(),
            Cell::Amplitudes(a) => a
                .iter()
                .map(|z| format!("{}{:+}i", format_g9(z.re), ImPart(z.im)))
                .collect::<Vec<_>>()
                .join(" "),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => num_or_text(*v),
            Cell::Int(v) => Value::from(*v),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
            Cell::Amplitudes(a) => Value::Array(
                a.iter()
                    .map(|z| Value::Array(vec![num_or_text(z.re), num_or_text(z.im)]))
                    .collect(),
            ),
        }
    }
}

struct ImPart(f64);

impl std::fmt::Display for ImPart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = format_g9(self.0);
        if f.sign_plus() && !s.starts_with('-') {
            write!(f, "+{s}")
        } else {
            f.write_str(&s)
        }
    }
}

/// Finite numbers as JSON numbers, the rest as "inf" / "-inf" / "nan".
pub fn num_or_text(v: f64) -> Value {
    Number::from_f64(v).map_or_else(|| Value::String(format_g9(v)), Value::Number)
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One output row: ordered (column, value) pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(pub Vec<(String, Cell)>);

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<Cell>) -> &mut Self {
        self.0.push((key.into(), value.into()));
        self
    }

    pub fn with(mut self, key: impl Into<String>, value: impl Into<Cell>) -> Self {
        self.push(key, value);
        self
    }

    pub fn get(&self, key: &str) -> Option<&Cell> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (k, v) in &self.0 {
            map.insert(k.clone(), v.json());
        }
        Value::Object(map)
    }
}

/// Header from the first record, then one line per record, '\n' endings.
pub fn to_csv(records: &[Record]) -> String {
    let mut out = String::new();
    let Some(first) = records.first() else {
        return out;
    };
    let header: Vec<String> = first.0.iter().map(|(k, _)| csv_quote(k)).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for r in records {
        let line: Vec<String> = r.0.iter().map(|(_, v)| v.csv()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// A single record as an object, several as an array; trailing newline.
pub fn to_json(records: &[Record]) -> String {
    let value = match records {
        [one] => one.to_json(),
        many => Value::Array(many.iter().map(Record::to_json).collect()),
    };
    let mut s = serde_json::to_string_pretty(&value).expect("serializable");
    s.push('\n');
    s
}
