//! Result tables and their CSV form.
//!
//! Layout: `#`-prefixed metadata lines (tool version, resolved config, content
//! hash), a header row, then one record per row. Floats use the shortest
//! representation that round-trips; line endings are `\n`.

use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

pub const VERSION: &str = concat!("delta-atom ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
}

impl Cell {
    pub fn as_f64(self) -> f64 {
        match self {
            Cell::Int(i) => i as f64,
            Cell::Float(x) => x,
        }
    }

    fn render(self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format!("{x:?}"),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra `key: value` metadata lines, written after the config echo.
    pub notes: Vec<(String, String)>,
    /// Single-line JSON of the resolved config.
    pub config: String,
}

impl ResultTable {
    pub fn new(header: Vec<String>, config: String) -> Self {
        Self { header, rows: Vec::new(), notes: Vec::new(), config }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &str, value: impl Into<String>) {
        self.notes.push((key.to_string(), value.into()));
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64()).collect())
    }

    /// Header and records only.
    pub fn body(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.render())).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
    }

    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.body().as_bytes()))
    }

    pub fn to_csv(&self) -> String {
        let body = self.body();
        let mut out = format!("# {VERSION}\n# config: {}\n", self.config);
        for (k, v) in &self.notes {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        out.push_str(&format!("# sha256: {}\n", hex::encode(Sha256::digest(body.as_bytes()))));
        out.push_str(&body);
        out
    }

    /// Writes through a temporary file in the destination directory and
    /// renames it into place.
    pub fn write_atomic(&self, path: &Path) -> Result<()> {
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
        tmp.write_all(self.to_csv().as_bytes()).map_err(|e| CliError::io(tmp.path(), e))?;
        tmp.as_file().sync_all().map_err(|e| CliError::io(path, e))?;
        tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
        Ok(())
    }
}
