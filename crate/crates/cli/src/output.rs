//! Tables and verification reports rendered as JSON, CSV or plain text.
//!
//! JSON is one object `{metadata, config_echo, rows?, summary?, reports?}`.
//! Exact rationals are `"num/den"` strings there; CSV gives each rational
//! column a second `<name>_decimal` column.

use std::io::Write;

use binsum::rational::{format_rat, to_decimal};
use binsum::{BigFloat, BigRat, VerificationReport};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Int(i64),
    Rat(BigRat),
    Float(BigFloat),
    Text(String),
    Bool(bool),
    Null,
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<BigRat> for Cell {
    fn from(v: BigRat) -> Self {
        Cell::Rat(v)
    }
}

impl From<BigFloat> for Cell {
    fn from(v: BigFloat) -> Self {
        Cell::Float(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Default)]
pub struct Output {
    pub rows: Option<Table>,
    pub summary: Option<Table>,
    pub reports: Vec<VerificationReport>,
}

impl Output {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(VerificationReport::passed)
    }
}

pub struct Renderer {
    pub format: Format,
    pub digits: usize,
}

impl Renderer {
    fn json_cell(&self, cell: &Cell) -> Value {
        match cell {
            Cell::Int(v) => json!(v),
            Cell::Rat(q) => json!(format_rat(q)),
            Cell::Float(x) => json!(x.to_decimal(self.digits)),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Null => Value::Null,
        }
    }

    fn json_table(&self, table: &Table) -> Value {
        let rows = table
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> =
                    table.columns.iter().zip(row).map(|(c, v)| (c.to_string(), self.json_cell(v))).collect();
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }

    fn text_cell(&self, cell: &Cell) -> String {
        match cell {
            Cell::Int(v) => v.to_string(),
            Cell::Rat(q) => {
                let exact = format_rat(q);
                if exact.len() <= 40 {
                    exact
                } else {
                    format!("~{}", to_decimal(q, self.digits))
                }
            }
            Cell::Float(x) => x.to_decimal(self.digits),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => "-".into(),
        }
    }

    fn write_text_table(&self, out: &mut impl Write, table: &Table) -> std::io::Result<()> {
        let cells: Vec<Vec<String>> =
            table.rows.iter().map(|r| r.iter().map(|c| self.text_cell(c)).collect()).collect();
        let widths: Vec<usize> = table
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
            .collect();
        let line = |parts: Vec<String>| {
            parts.iter().zip(&widths).map(|(p, w)| format!("{p:>w$}")).collect::<Vec<_>>().join("  ")
        };
        writeln!(out, "{}", line(table.columns.iter().map(|c| c.to_string()).collect()))?;
        for row in cells {
            writeln!(out, "{}", line(row))?;
        }
        Ok(())
    }

    fn write_csv_table(&self, out: &mut impl Write, table: &Table) -> anyhow::Result<()> {
        let rational: Vec<bool> =
            (0..table.columns.len()).map(|i| table.rows.iter().any(|r| matches!(r[i], Cell::Rat(_)))).collect();
        let mut writer = csv::Writer::from_writer(out);
        let mut header = Vec::new();
        for (c, &is_rat) in table.columns.iter().zip(&rational) {
            header.push(c.to_string());
            if is_rat {
                header.push(format!("{c}_decimal"));
            }
        }
        writer.write_record(&header)?;
        for row in &table.rows {
            let mut record = Vec::new();
            for (cell, &is_rat) in row.iter().zip(&rational) {
                match cell {
                    Cell::Rat(q) => {
                        record.push(format_rat(q));
                        record.push(to_decimal(q, self.digits));
                    }
                    Cell::Null => {
                        record.push(String::new());
                        if is_rat {
                            record.push(String::new());
                        }
                    }
                    other => record.push(self.text_cell(other)),
                }
            }
            writer.write_record(&record)?;
        }
        writer.flush()?;
        Ok(())
    }

    fn reports_table(reports: &[VerificationReport]) -> Table {
        let mut t = Table::new(&["check_id", "domain", "passed", "cases", "skipped", "counterexamples", "first"]);
        for r in reports {
            t.push(vec![
                r.check_id().into(),
                r.domain().into(),
                r.passed().into(),
                (r.cases() as i64).into(),
                (r.skipped() as i64).into(),
                r.counterexamples().len().into(),
                r.counterexamples().first().map(|c| c.to_string()).into(),
            ]);
        }
        t
    }

    pub fn render(&self, out: &mut impl Write, output: &Output, config: &Value) -> anyhow::Result<()> {
        match self.format {
            Format::Json => {
                let mut top = Map::new();
                top.insert(
                    "metadata".into(),
                    json!({
                        "tool": "binsum",
                        "version": env!("CARGO_PKG_VERSION"),
                        "timestamp": chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
                    }),
                );
                top.insert("config_echo".into(), config.clone());
                if let Some(t) = &output.rows {
                    top.insert("rows".into(), self.json_table(t));
                }
                if let Some(t) = &output.summary {
                    top.insert("summary".into(), self.json_table(t));
                }
                if !output.reports.is_empty() {
                    top.insert("passed".into(), json!(output.passed()));
                    top.insert("reports".into(), serde_json::to_value(&output.reports)?);
                }
                serde_json::to_writer_pretty(&mut *out, &Value::Object(top))?;
                writeln!(out)?;
            }
            Format::Csv => {
                let table = match &output.rows {
                    Some(t) => t.clone(),
                    None => Self::reports_table(&output.reports),
                };
                self.write_csv_table(out, &table)?;
            }
            Format::Text => {
                for t in [&output.rows, &output.summary].into_iter().flatten() {
                    self.write_text_table(out, t)?;
                    writeln!(out)?;
                }
                for r in &output.reports {
                    writeln!(out, "{r}")?;
                    for c in r.counterexamples().iter().take(10) {
                        writeln!(out, "    {c}")?;
                    }
                    if r.counterexamples().len() > 10 {
                        writeln!(out, "    ... {} more", r.counterexamples().len() - 10)?;
                    }
                }
            }
        }
        Ok(())
    }
}
