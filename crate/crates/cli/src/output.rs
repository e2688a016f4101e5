//! Tables rendered as CSV or JSON.
//!
//! An [`Estimate`] occupies one value column plus `_mode`, `_stderr` and
//! `_abserr` companions, which follow the plain columns so that fixed
//! column prefixes such as `N,start,step,lhs,rhs,ratio` stay intact.

use dirichlet_ruc::random::{Estimate, Mode};
use dirichlet_ruc::Complex64;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Bool(bool),
    Text(String),
    Ints(Vec<u64>),
    Complexes(Vec<Complex64>),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Float(x) => float(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Ints(v) => join(v.iter().map(u64::to_string)),
            Cell::Complexes(v) => join(v.iter().map(|c| format!("{}:{}", float(c.re), float(c.im)))),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(n) => Value::from(*n),
            Cell::Float(x) => float_json(*x),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Ints(v) => Value::from(v.clone()),
            Cell::Complexes(v) => Value::Array(
                v.iter()
                    .map(|c| Value::Array(vec![float_json(c.re), float_json(c.im)]))
                    .collect(),
            ),
        }
    }
}

fn join(items: impl Iterator<Item = String>) -> String {
    items.collect::<Vec<_>>().join(" ")
}

/// Shortest round-trip representation with a decimal point or exponent.
fn float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else if x == 0.0 {
        // Signed zeros come from phases of vanishing coefficients.
        "0.0".into()
    } else {
        format!("{x:?}")
    }
}

fn float_json(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or_else(|| Value::String(float(x)), Value::Number)
}

#[derive(Debug, Clone, Default)]
pub struct Row {
    plain: Vec<(String, Cell)>,
    extra: Vec<(String, Cell)>,
}

impl Row {
    pub fn new() -> Self {
        Row::default()
    }

    pub fn cell(mut self, name: &str, c: Cell) -> Self {
        self.plain.push((name.into(), c));
        self
    }

    pub fn int(self, name: &str, n: u64) -> Self {
        self.cell(name, Cell::Int(n))
    }

    pub fn float(self, name: &str, x: f64) -> Self {
        self.cell(name, Cell::Float(x))
    }

    pub fn estimate(mut self, name: &str, e: &Estimate) -> Self {
        self.plain.push((name.into(), Cell::Float(e.value)));
        self.push_uncertainty(name, e.mode, e.stderr, e.abs_error);
        self
    }

    /// A derived value with its mode and propagated uncertainty.
    pub fn derived(mut self, name: &str, value: f64, mode: Mode, stderr: f64, abs_error: f64) -> Self {
        self.plain.push((name.into(), Cell::Float(value)));
        self.push_uncertainty(name, mode, stderr, abs_error);
        self
    }

    fn push_uncertainty(&mut self, name: &str, mode: Mode, stderr: f64, abs_error: f64) {
        self.extra.push((format!("{name}_mode"), Cell::Text(mode.as_str().into())));
        self.extra.push((format!("{name}_stderr"), Cell::Float(stderr)));
        self.extra.push((format!("{name}_abserr"), Cell::Float(abs_error)));
    }

    fn cells(&self) -> impl Iterator<Item = &(String, Cell)> {
        self.plain.iter().chain(&self.extra)
    }
}

pub fn render(rows: &[Row], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
            if let Some(first) = rows.first() {
                w.write_record(first.cells().map(|(n, _)| n.as_str()))
                    .expect("in-memory write");
            }
            for r in rows {
                w.write_record(r.cells().map(|(_, c)| c.csv()))
                    .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
        }
        Format::Json => {
            let arr: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let m: Map<String, Value> = r.cells().map(|(n, c)| (n.clone(), c.json())).collect();
                    Value::Object(m)
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&Value::Array(arr)).expect("json values");
            s.push('\n');
            s
        }
    }
}
