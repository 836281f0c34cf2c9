use std::fmt::Write as _;

use pascal_adic::exactnum::{format_rational, to_f64};
use pascal_adic::Rational;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug)]
pub enum Cell {
    Rat(Rational),
    Float(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl From<Rational> for Cell {
    fn from(r: Rational) -> Self {
        Cell::Rat(r)
    }
}

impl From<&Rational> for Cell {
    fn from(r: &Rational) -> Self {
        Cell::Rat(r.clone())
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
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

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// `%.12g`-style decimal: 12 significant digits, trailing zeros dropped.
pub fn fmt_float(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if !(-5..12).contains(&exp) {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    trim_zeros(&format!("{:.*}", (11 - exp) as usize, v)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn fmt_rational(r: &Rational, exact: bool) -> String {
    if exact {
        format_rational(r)
    } else {
        fmt_float(to_f64(r))
    }
}

impl Cell {
    pub fn render(&self, exact: bool) -> String {
        match self {
            Cell::Rat(r) => fmt_rational(r, exact),
            Cell::Float(v) => fmt_float(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self, exact: bool) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Empty => Value::Null,
            other => json!(other.render(exact)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self, exact: bool) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.render(exact)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    /// An array of objects keyed by the header.
    pub fn to_json(&self, exact: bool) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj = self
                        .header
                        .iter()
                        .zip(row)
                        .map(|(h, c)| (h.to_string(), c.to_json(exact)))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// What a command produces; rendered according to the chosen format.
pub enum Output {
    Table(Table),
    /// Structured result with its own tabular form.
    Both {
        json: Value,
        table: Table,
    },
    /// Plain text, with a JSON form when one makes sense.
    Text {
        text: String,
        json: Option<Value>,
    },
}

impl Output {
    pub fn render(&self, format: Format, exact: bool) -> String {
        match (self, format) {
            (Output::Table(t), Format::Csv) | (Output::Both { table: t, .. }, Format::Csv) => {
                t.to_csv(exact)
            }
            (Output::Table(t), Format::Json) => pretty(&t.to_json(exact)),
            (Output::Both { json, .. }, Format::Json) => pretty(json),
            (Output::Text { json: Some(v), .. }, Format::Json) => pretty(v),
            (Output::Text { text, .. }, _) => text.clone(),
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap();
    s.push('\n');
    s
}
