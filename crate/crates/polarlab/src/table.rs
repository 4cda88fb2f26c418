//! CSV tables with `#`-prefixed header lines.
//!
//! Floats are written with 17 significant digits so they parse back to the
//! same bits; a table read from disk writes back byte for byte.

use std::io::Write;
use std::path::Path;

use crate::error::{LabError, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    /// Header lines without the leading `# `.
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_bool(b: bool) -> String {
    u8::from(b).to_string()
}

/// Header block shared by every output file: tool version, then the config.
pub fn header(config_toml: &str) -> Vec<String> {
    let mut h = vec![format!("polarlab {VERSION}")];
    h.extend(config_toml.lines().map(str::to_string));
    h
}

impl Table {
    pub fn new(comments: Vec<String>, columns: &[&str]) -> Self {
        Table {
            comments,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// A column parsed as floats.
    pub fn floats(&self, name: &str) -> Result<Vec<f64>> {
        let j = self
            .column(name)
            .ok_or_else(|| LabError::MissingInput(format!("no column `{name}`")))?;
        self.rows
            .iter()
            .map(|r| {
                r[j].parse::<f64>().map_err(|_| {
                    LabError::MissingInput(format!("`{}` in `{name}` is not a number", r[j]))
                })
            })
            .collect()
    }

    fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for c in &self.comments {
            if c.is_empty() {
                writeln!(w, "#")?;
            } else {
                writeln!(w, "# {c}")?;
            }
        }
        let mut csv = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        csv.write_record(&self.columns)?;
        for r in &self.rows {
            csv.write_record(r)?;
        }
        csv.flush()
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let parse_err = |detail: String| LabError::Parse {
            path: origin.to_path_buf(),
            detail,
        };
        let mut comments = Vec::new();
        let mut body = 0;
        for line in text.split_inclusive('\n') {
            let Some(c) = line.strip_prefix('#') else {
                break;
            };
            let c = c.trim_end_matches('\n');
            comments.push(c.strip_prefix(' ').unwrap_or(c).to_string());
            body += line.len();
        }
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(&text.as_bytes()[body..]);
        let columns: Vec<String> = rdr
            .headers()
            .map_err(|e| parse_err(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        if columns.is_empty() || columns == [""] {
            return Err(LabError::MissingInput(format!(
                "{} has no table",
                origin.display()
            )));
        }
        let rows = rdr
            .records()
            .map(|r| {
                r.map(|r| r.iter().map(str::to_string).collect())
                    .map_err(|e| parse_err(e.to_string()))
            })
            .collect::<Result<Vec<Vec<String>>>>()?;
        Ok(Table {
            comments,
            columns,
            rows,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        if text.trim().is_empty() {
            return Err(LabError::MissingInput(format!(
                "{} is empty",
                path.display()
            )));
        }
        Self::parse(&text, path)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_string()).map_err(|e| LabError::io(path, e))
    }
}

impl std::fmt::Display for Table {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut out = Vec::new();
        self.write_to(&mut out).map_err(|_| std::fmt::Error)?;
        f.write_str(std::str::from_utf8(&out).map_err(|_| std::fmt::Error)?)
    }
}

/// Plain text artifacts (JSON).
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| LabError::io(path, e))
}
