//! Rendering of command results as JSON, CSV or LaTeX.

use std::fmt::Write as _;

use anyhow::Result;
use clap::ValueEnum;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Latex,
}

/// A result that knows its three renderings. CSV and LaTeX fall back to a
/// header/rows table.
pub struct Doc {
    pub json: serde_json::Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Replaces the generic LaTeX table when set.
    pub latex: Option<String>,
}

impl Doc {
    pub fn new<T: Serialize>(value: &T) -> Result<Doc> {
        Ok(Doc { json: serde_json::to_value(value)?, header: Vec::new(), rows: Vec::new(), latex: None })
    }

    pub fn table(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Doc {
        self.header = header.iter().map(|s| s.to_string()).collect();
        self.rows = rows;
        self
    }

    pub fn latex(mut self, text: String) -> Doc {
        self.latex = Some(text);
        self
    }

    pub fn render(&self, format: Format) -> Result<String> {
        Ok(match format {
            Format::Json => serde_json::to_string_pretty(&self.json)? + "\n",
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                if !self.header.is_empty() {
                    w.write_record(&self.header)?;
                }
                for r in &self.rows {
                    w.write_record(r)?;
                }
                String::from_utf8(w.into_inner()?)?
            }
            Format::Latex => match &self.latex {
                Some(t) => t.clone() + "\n",
                None => latex_table(&self.header, &self.rows),
            },
        })
    }
}

fn latex_table(header: &[String], rows: &[Vec<String>]) -> String {
    let cols = header.len().max(rows.first().map_or(0, Vec::len));
    let mut s = String::new();
    let _ = writeln!(s, "\\begin{{tabular}}{{{}}}", "l".repeat(cols));
    if !header.is_empty() {
        let _ = writeln!(s, "{} \\\\ \\hline", header.join(" & "));
    }
    for r in rows {
        let _ = writeln!(s, "{} \\\\", r.join(" & "));
    }
    s.push_str("\\end{tabular}\n");
    s
}

pub fn pmatrix(rows: &[Vec<String>]) -> String {
    let body: Vec<String> = rows.iter().map(|r| r.join(" & ")).collect();
    format!("\\begin{{pmatrix}}\n{}\n\\end{{pmatrix}}", body.join(" \\\\\n"))
}
