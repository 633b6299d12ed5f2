//! Rendering of command results as JSON, CSV or plain text.

use std::fmt::Write as _;

use ergo_core::Dyadic;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// One table cell. Dyadic values stay exact in every format; text mode
/// appends a decimal approximation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Text(String),
    Int(String),
    Dyadic(Dyadic),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Text(s) | Cell::Int(s) => s.clone(),
            Cell::Dyadic(d) => d.to_string(),
        }
    }

    fn text(&self) -> String {
        match self {
            Cell::Dyadic(d) if !d.is_integer() => format!("{d} (≈ {})", d.to_f64()),
            other => other.csv(),
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<Dyadic> for Cell {
    fn from(d: Dyadic) -> Self {
        Cell::Dyadic(d)
    }
}

impl From<&Dyadic> for Cell {
    fn from(d: &Dyadic) -> Self {
        Cell::Dyadic(d.clone())
    }
}

macro_rules! int_cell {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(n: $t) -> Self {
                Cell::Int(n.to_string())
            }
        }
    )*};
}
int_cell!(u32, u64, i64, usize, bool, &num_bigint::BigInt, num_bigint::BigInt);

/// The result of a command: a JSON document and a table view of it.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub json: Value,
    /// Lines written as `# …` above the CSV header and the text table.
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Output {
    pub fn new(json: Value, header: &[&str]) -> Self {
        Output {
            json,
            comments: Vec::new(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn comment(mut self, line: impl Into<String>) -> Self {
        self.comments.push(line.into());
        self
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }
}

/// Deterministic serialization of `out`.
pub fn emit_report(out: &Output, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut bytes = serde_json::to_vec_pretty(&out.json).expect("values serialize");
            bytes.push(b'\n');
            bytes
        }
        Format::Csv => {
            let mut bytes = Vec::new();
            for c in &out.comments {
                bytes.extend_from_slice(format!("# {c}\n").as_bytes());
            }
            let mut w = csv::Writer::from_writer(bytes);
            w.write_record(&out.header).expect("in-memory write");
            for row in &out.rows {
                w.write_record(row.iter().map(Cell::csv)).expect("in-memory write");
            }
            w.into_inner().expect("in-memory write")
        }
        Format::Text => {
            let mut s = String::new();
            for c in &out.comments {
                let _ = writeln!(s, "# {c}");
            }
            let cells: Vec<Vec<String>> = out
                .rows
                .iter()
                .map(|r| r.iter().map(Cell::text).collect())
                .collect();
            let widths: Vec<usize> = (0..out.header.len())
                .map(|i| {
                    cells
                        .iter()
                        .map(|r| r[i].chars().count())
                        .chain([out.header[i].chars().count()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let mut line = |fields: &[String]| {
                let padded: Vec<String> = fields
                    .iter()
                    .zip(&widths)
                    .map(|(f, &w)| format!("{f:<w$}"))
                    .collect();
                let _ = writeln!(s, "{}", padded.join("  ").trim_end());
            };
            line(&out.header);
            for r in &cells {
                line(r);
            }
            s.into_bytes()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_keeps_dyadics_exact() {
        let mut out = Output::new(json!({}), &["x"]);
        out.row(vec![Dyadic::new(1, 2).into()]);
        let csv = String::from_utf8(emit_report(&out, Format::Csv)).unwrap();
        assert_eq!(csv, "x\n1/2^2\n");
        let text = String::from_utf8(emit_report(&out, Format::Text)).unwrap();
        assert!(text.contains("1/2^2 (≈ 0.25)"));
    }

    #[test]
    fn comments_precede_the_header() {
        let out = Output::new(json!(null), &["a", "b"]).comment("note");
        let csv = String::from_utf8(emit_report(&out, Format::Csv)).unwrap();
        assert_eq!(csv, "# note\na,b\n");
    }
}
