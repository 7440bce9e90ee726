//! Tabular results and their CSV / JSON renderings.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Flag(bool),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(v) => float(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Flag(b) => u8::from(*b).to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(v) => json!(v.to_string()),
            Cell::Int(v) => json!(v),
            Cell::Flag(b) => json!(b),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
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
        Cell::Flag(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// 17 significant digits, enough to round-trip any double.
pub fn float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// One run of a subcommand: its parameters, a result table and notes.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub subcommand: String,
    pub parameters: Vec<(String, Cell)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub diagnostics: Vec<String>,
}

impl Report {
    pub fn new(subcommand: &str, columns: &[&str]) -> Self {
        Report {
            subcommand: subcommand.to_string(),
            parameters: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    pub fn param(mut self, name: &str, value: impl Into<Cell>) -> Self {
        self.parameters.push((name.to_string(), value.into()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.diagnostics.push(msg.into());
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let parameters: Map<String, Value> = self
            .parameters
            .iter()
            .map(|(k, v)| (k.clone(), v.json()))
            .collect();
        let results: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .cloned()
                    .zip(row.iter().map(Cell::json))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let doc = json!({
            "subcommand": self.subcommand,
            "parameters": parameters,
            "results": results,
            "diagnostics": self.diagnostics,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("report is valid JSON");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("demo", &["x", "value", "ok"])
            .param("a", 0.25)
            .param("depth", 4usize);
        r.push(vec![0.5.into(), 0.1.into(), true.into()]);
        r.note("fine");
        r
    }

    #[test]
    fn floats_round_trip() {
        for &v in &[0.1, 1.0 / 3.0, -2.5e-300, 12345.678] {
            assert_eq!(float(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(float(0.25), "2.5000000000000000e-1");
    }

    #[test]
    fn csv_layout() {
        assert_eq!(
            sample().to_csv(),
            "x,value,ok\n5.0000000000000000e-1,1.0000000000000001e-1,1\n"
        );
    }

    #[test]
    fn json_layout() {
        let v: Value = serde_json::from_str(&sample().to_json()).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["subcommand", "parameters", "results", "diagnostics"]);
        assert_eq!(v["results"][0]["value"], json!(0.1));
        assert_eq!(v["parameters"]["depth"], json!(4));
        assert_eq!(v["diagnostics"][0], json!("fine"));
    }
}
