//! CSV and JSON formats for step functions, spectra and report tables.
//!
//! Function CSV:
//!
//! ```text
//! order,resolution
//! 2,2
//! index,re,im
//! 0,0.875,0.0
//! ...
//! ```
//!
//! Spectrum CSV is identical with `order,length` in place of
//! `order,resolution`. Floats are written in the shortest form that parses
//! back to the same `f64`, so both formats round-trip bit for bit.
//! Blank lines and lines starting with `#` are ignored on input.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::radix::Order;
use crate::transform::Spectrum;
use crate::walsh::StepFunction;

/// Shortest round-trip decimal form, with an exponent for very large or
/// small magnitudes.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Entry {
    pub index: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Serialize, Deserialize)]
struct FunctionDoc {
    order: Order,
    resolution: u32,
    values: Vec<Entry>,
}

#[derive(Serialize, Deserialize)]
struct SpectrumDoc {
    order: Order,
    length: usize,
    coefficients: Vec<Entry>,
}

pub fn entries(values: &[Complex64]) -> Vec<Entry> {
    values
        .iter()
        .enumerate()
        .map(|(index, c)| Entry {
            index,
            re: c.re,
            im: c.im,
        })
        .collect()
}

/// Appends `index,re,im` and one row per value.
pub fn push_entry_rows(out: &mut String, values: &[Complex64]) {
    out.push_str("index,re,im\n");
    for (i, c) in values.iter().enumerate() {
        out.push_str(&format!("{i},{},{}\n", fmt_f64(c.re), fmt_f64(c.im)));
    }
}

pub fn function_csv(f: &StepFunction) -> String {
    let mut out = format!("order,resolution\n{},{}\n", f.order(), f.resolution());
    push_entry_rows(&mut out, f.values());
    out
}

pub fn spectrum_csv(s: &Spectrum) -> String {
    let mut out = format!("order,length\n{},{}\n", s.order(), s.len());
    push_entry_rows(&mut out, s.coefficients());
    out
}

pub fn function_json(f: &StepFunction) -> String {
    to_json(&FunctionDoc {
        order: f.order(),
        resolution: f.resolution(),
        values: entries(f.values()),
    })
}

pub fn spectrum_json(s: &Spectrum) -> String {
    to_json(&SpectrumDoc {
        order: s.order(),
        length: s.len(),
        coefficients: entries(s.coefficients()),
    })
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn is_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_field<T: std::str::FromStr>(field: &str, line: usize, what: &str) -> Result<T> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: invalid {what} '{}'", field.trim())))
}

/// Header pair, `index,re,im` rows, checked to be `0, 1, 2, ...`.
fn parse_csv(text: &str, second: &str) -> Result<(Order, u64, Vec<Complex64>)> {
    let mut lines = content_lines(text);
    let expected = format!("order,{second}");
    let (ln, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty input".into()))?;
    if header.replace(' ', "") != expected {
        return Err(Error::Parse(format!(
            "line {ln}: expected header '{expected}'"
        )));
    }
    let (ln, meta) = lines
        .next()
        .ok_or_else(|| Error::Parse(format!("missing '{expected}' values")))?;
    let fields: Vec<&str> = meta.split(',').collect();
    if fields.len() != 2 {
        return Err(Error::Parse(format!("line {ln}: expected two fields")));
    }
    let order = Order::new(parse_field(fields[0], ln, "order")?)?;
    let size: u64 = parse_field(fields[1], ln, second)?;
    let (ln, rows_header) = lines
        .next()
        .ok_or_else(|| Error::Parse("missing 'index,re,im' header".into()))?;
    if rows_header.replace(' ', "") != "index,re,im" {
        return Err(Error::Parse(format!(
            "line {ln}: expected header 'index,re,im'"
        )));
    }
    let mut values = Vec::new();
    for (ln, row) in lines {
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!("line {ln}: expected three fields")));
        }
        let index: usize = parse_field(fields[0], ln, "index")?;
        if index != values.len() {
            return Err(Error::Parse(format!(
                "line {ln}: expected index {}, got {index}",
                values.len()
            )));
        }
        values.push(Complex64::new(
            parse_field(fields[1], ln, "real part")?,
            parse_field(fields[2], ln, "imaginary part")?,
        ));
    }
    Ok((order, size, values))
}

fn check_indices(entries: &[Entry]) -> Result<Vec<Complex64>> {
    entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            if e.index == i {
                Ok(Complex64::new(e.re, e.im))
            } else {
                Err(Error::Parse(format!("entry {i} has index {}", e.index)))
            }
        })
        .collect()
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Reads a step function in either format.
pub fn read_function(text: &str) -> Result<StepFunction> {
    let (order, resolution, values) = if is_json(text) {
        let doc: FunctionDoc = serde_json::from_str(text).map_err(json_error)?;
        (doc.order, doc.resolution, check_indices(&doc.values)?)
    } else {
        let (order, resolution, values) = parse_csv(text, "resolution")?;
        let resolution = u32::try_from(resolution)
            .map_err(|_| Error::Parse(format!("resolution {resolution} out of range")))?;
        (order, resolution, values)
    };
    StepFunction::new(order, resolution, values)
}

/// Reads a spectrum in either format.
pub fn read_spectrum(text: &str) -> Result<Spectrum> {
    let (order, length, values) = if is_json(text) {
        let doc: SpectrumDoc = serde_json::from_str(text).map_err(json_error)?;
        (
            doc.order,
            doc.length as u64,
            check_indices(&doc.coefficients)?,
        )
    } else {
        parse_csv(text, "length")?
    };
    if values.len() as u64 != length {
        return Err(Error::Parse(format!(
            "declared length {length} but found {} coefficients",
            values.len()
        )));
    }
    Ok(Spectrum::new(order, values))
}

/// Non-negative integers separated by whitespace or commas; `#` starts a comment.
pub fn read_index_list(text: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            out.push(parse_field(tok, ln + 1, "index")?);
        }
    }
    Ok(out)
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match (n.as_u64(), n.as_i64(), n.as_f64()) {
            (Some(u), _, _) => u.to_string(),
            (_, Some(i), _) => i.to_string(),
            (_, _, Some(f)) => fmt_f64(f),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(csv_cell).collect::<Vec<_>>().join(";"),
        Value::Object(_) => v.to_string(),
    }
}

/// One CSV row per record, header from the struct's field names in
/// declaration order. `None` fields are left empty.
pub fn records_csv<T: Serialize>(records: &[T]) -> String {
    let mut out = String::new();
    for (i, r) in records.iter().enumerate() {
        let Value::Object(map) = serde_json::to_value(r).expect("records serialize") else {
            panic!("records_csv needs struct records");
        };
        if i == 0 {
            out.push_str(&map.keys().cloned().collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out.push_str(&map.values().map(csv_cell).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}
