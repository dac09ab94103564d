use std::io::{self, Write};

use cfr_core::{ComplexityReport, Method};
use serde_json::{Map, Number, Value};

use crate::config::Format;

/// Significant digits of every printed number.
pub const DIGITS: usize = 12;

/// Round to [`DIGITS`] significant digits.
pub fn round_sig(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{:.*e}", DIGITS - 1, v).parse().unwrap_or(v)
}

/// `%.12g`-style rendering: fixed notation for moderate exponents, trailing zeros dropped.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..DIGITS as i32).contains(&exp) {
        let r: f64 = sci.parse().expect("round trip");
        let decimals = (DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{r:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn json_number(v: f64) -> Value {
    Number::from_f64(round_sig(v)).map_or(Value::Null, Value::Number)
}

/// Method names use the CLI vocabulary.
pub fn method_name(m: Method) -> &'static str {
    match m {
        Method::Analytic => "closed",
        Method::Quadrature => "quadrature",
        Method::Both => "both",
    }
}

/// A table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format_number(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => csv_escape(s),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => json_number(*v),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Empty => Value::Null,
        }
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Named columns and rows of cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    fn objects(&self) -> Vec<Value> {
        self.rows
            .iter()
            .map(|row| {
                let map: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, c)| (k.to_string(), c.json()))
                    .collect();
                Value::Object(map)
            })
            .collect()
    }

    /// A JSON array of row objects, or a single object when `single` is set.
    pub fn write_json<W: Write>(&self, mut out: W, single: bool) -> io::Result<()> {
        let mut objects = self.objects();
        let value = if single && objects.len() == 1 {
            objects.pop().expect("one row")
        } else {
            Value::Array(objects)
        };
        serde_json::to_writer_pretty(&mut out, &value)?;
        writeln!(out)
    }

    pub fn write<W: Write>(&self, out: W, format: Format, single: bool) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out, single),
        }
    }
}

/// The report columns shared by every table.
pub fn report_cells(r: &ComplexityReport) -> Vec<Cell> {
    vec![
        Cell::Num(r.fisher_lambda.value),
        Cell::Num(r.renyi_power.value),
        Cell::Num(r.d_norm),
        Cell::Num(r.cfr),
        Cell::Text(method_name(r.method).into()),
        r.discrepancy.map_or(Cell::Empty, Cell::Num),
    ]
}
