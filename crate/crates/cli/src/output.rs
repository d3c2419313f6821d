//! Tables written as CSV with `#` comment headers, or as JSON.

use std::io::Write;

use anyhow::Result;
use serde_json::{json, Map, Value};
use twocenter_core::ModelParams;

use crate::config::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn opt(x: Option<f64>) -> Cell {
        x.map_or(Cell::Empty, Cell::Num)
    }

    fn csv(&self) -> String {
        match self {
            Cell::Num(x) if x.is_finite() => format!("{x:.9e}"),
            Cell::Num(_) | Cell::Empty => String::new(),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(_) | Cell::Empty => Value::Null,
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
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

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Text(b.to_string())
    }
}

impl From<u32> for Cell {
    fn from(i: u32) -> Self {
        Cell::Int(i.into())
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

pub struct Table {
    pub comments: Vec<String>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(params: &ModelParams, hbar_list: &[f64], header: Vec<&'static str>) -> Self {
        let hbars: Vec<String> = hbar_list.iter().map(|h| format!("{h}")).collect();
        Table {
            comments: vec![
                format!("hbar={}", hbars.join(";")),
                format!("delta={}", params.delta),
                format!("wtype={}", params.wtype),
                format!("kappa={}", params.kappa),
                format!("c1={}", params.c1),
                format!("c2={}", params.c2),
                format!("a={}", params.a),
                format!("b={}", params.b),
            ],
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
                writeln!(out)?;
                Ok(())
            }
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> Result<()> {
        for c in &self.comments {
            writeln!(out, "# {c}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.flush()?;
        Ok(())
    }

    fn to_json(&self) -> Value {
        let meta: Map<String, Value> = self
            .comments
            .iter()
            .filter_map(|c| c.split_once('='))
            .map(|(k, v)| (k.to_string(), json!(v)))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Object(
                    self.header
                        .iter()
                        .zip(r)
                        .map(|(k, c)| (k.to_string(), c.json()))
                        .collect(),
                )
            })
            .collect();
        json!({ "meta": meta, "rows": rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let p = ModelParams::type_i(1.0, 0.5).unwrap();
        let mut t = Table::new(&p, &[1.0], vec!["x", "y", "note"]);
        t.push(vec![Cell::Num(1.0 / 3.0), Cell::Empty, "a,b".into()]);
        let mut buf = Vec::new();
        t.write(Format::Csv, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("# hbar=1\n# delta=0.5\n"));
        assert!(s.ends_with("x,y,note\n3.333333333e-1,,\"a,b\"\n"), "{s}");
    }

    #[test]
    fn json_layout() {
        let p = ModelParams::type_i(1.0, 0.5).unwrap();
        let mut t = Table::new(&p, &[1.0, 2.0], vec!["x"]);
        t.push(vec![Cell::Num(f64::NAN)]);
        let mut buf = Vec::new();
        t.write(Format::Json, &mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["meta"]["hbar"], "1;2");
        assert!(v["rows"][0]["x"].is_null());
    }
}
