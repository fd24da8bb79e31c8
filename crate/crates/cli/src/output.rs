//! Atomic file output and the CSV/JSON text conventions.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde_json::Value;
use tempfile::NamedTempFile;

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Shortest string that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Debug, Clone)]
pub struct OutputDir {
    path: PathBuf,
}

impl OutputDir {
    /// Creates the directory if needed and checks that files can be
    /// created in it.
    pub fn prepare(path: &Path) -> Result<Self> {
        std::fs::create_dir_all(path).map_err(|e| CliError::io(path, e))?;
        NamedTempFile::new_in(path).map_err(|e| CliError::io(path, e))?;
        Ok(Self { path: path.to_path_buf() })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn file(&self, name: &str) -> PathBuf {
        self.path.join(name)
    }

    /// Writes `bytes` to a temporary file in the directory, then renames it
    /// over `name`.
    pub fn write(&self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let target = self.file(name);
        let mut tmp = NamedTempFile::new_in(&self.path).map_err(|e| CliError::io(&self.path, e))?;
        tmp.write_all(bytes).map_err(|e| CliError::io(tmp.path(), e))?;
        tmp.as_file().sync_all().map_err(|e| CliError::io(tmp.path(), e))?;
        tmp.persist(&target).map_err(|e| CliError::io(&target, e.error))?;
        Ok(target)
    }

    pub fn write_csv(&self, name: &str, csv: &Csv) -> Result<PathBuf> {
        self.write(name, csv.as_str().as_bytes())
    }

    /// Pretty JSON with a trailing newline. Object keys come out sorted.
    pub fn write_json(&self, name: &str, value: &Value) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
        text.push('\n');
        self.write(name, text.as_bytes())
    }
}

/// Comma-separated text with a header row and LF line endings.
#[derive(Debug, Clone, Default)]
pub struct Csv {
    text: String,
    columns: usize,
}

impl Csv {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        let mut csv = Self { text: String::new(), columns: header.len() };
        csv.push_line(header.iter().map(|s| s.as_ref().to_string()));
        csv
    }

    fn push_line(&mut self, cells: impl Iterator<Item = String>) {
        let cells: Vec<String> = cells.collect();
        debug_assert_eq!(cells.len(), self.columns);
        let _ = writeln!(self.text, "{}", cells.join(","));
    }

    pub fn row(&mut self, cells: &[Cell]) {
        self.push_line(cells.iter().map(Cell::render));
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Cell {
    F(f64),
    U(usize),
    B(bool),
    S(&'static str),
}

impl Cell {
    fn render(&self) -> String {
        match *self {
            Cell::F(x) => fmt_f64(x),
            Cell::U(n) => n.to_string(),
            Cell::B(b) => b.to_string(),
            Cell::S(s) => s.to_string(),
        }
    }
}
