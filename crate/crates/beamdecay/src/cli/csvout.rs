//! CSV and text-table output helpers. All CSVs use a header row, LF line
//! endings, UTF-8, and 17-significant-digit floats, so identical inputs
//! produce byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::numeric;

/// A cell: a number, literal text, or empty.
#[derive(Debug, Clone)]
pub enum Cell {
    F(f64),
    S(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::F(x) => numeric::fmt_csv(*x),
            Cell::S(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

/// In-memory CSV table.
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        CsvTable {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Writes under `dir/name`, never clobbering an existing file: a taken
    /// name gets a run index inserted before the extension.
    pub fn write(&self, dir: &Path, name: &str) -> Result<PathBuf> {
        let path = unique_path(dir, name);
        fs::write(&path, self.render())?;
        Ok(path)
    }
}

/// First free variant of `dir/name`: `name`, then `name.1.ext`, `name.2.ext`.
pub fn unique_path(dir: &Path, name: &str) -> PathBuf {
    let direct = dir.join(name);
    if !direct.exists() {
        return direct;
    }
    let (stem, ext) = match name.rsplit_once('.') {
        Some((s, e)) => (s.to_string(), Some(e.to_string())),
        None => (name.to_string(), None),
    };
    for i in 1.. {
        let candidate = match &ext {
            Some(e) => dir.join(format!("{stem}.{i}.{e}")),
            None => dir.join(format!("{stem}.{i}")),
        };
        if !candidate.exists() {
            return candidate;
        }
    }
    unreachable!()
}

/// Writes arbitrary text with the same non-clobbering naming.
pub fn write_text(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    let path = unique_path(dir, name);
    fs::write(&path, text)?;
    Ok(path)
}
