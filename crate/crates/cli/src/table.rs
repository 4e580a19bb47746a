//! Tabular output in CSV or JSON, stamped with the library version and the
//! config hash. Floats are written with 17 significant digits.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use mbi_core::spectral::fmt17;

use crate::config::{Format, RunConfig};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    I(i64),
    S(String),
    B(bool),
    Missing,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::F(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::I(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::B(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::S(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::S(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::F)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::F(x) => fmt17(*x),
            Cell::I(i) => i.to_string(),
            Cell::B(b) => b.to_string(),
            Cell::Missing => String::new(),
            Cell::S(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::S(s) => s.clone(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::F(x) if x.is_finite() => fmt17(*x),
            Cell::F(_) | Cell::Missing => "null".into(),
            Cell::I(i) => i.to_string(),
            Cell::B(b) => b.to_string(),
            Cell::S(s) => serde_json::to_string(s).expect("strings serialize"),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }
}

/// `# key: value` lines shared by every CSV file.
pub fn csv_preamble(out: &mut impl Write, cfg: &RunConfig) -> io::Result<()> {
    writeln!(out, "# library_version: {}", mbi_core::VERSION)?;
    writeln!(out, "# config_hash: {}", cfg.hash())?;
    writeln!(out, "# command: {}", cfg.command.name())
}

fn write_csv(out: &mut impl Write, cfg: &RunConfig, table: &Table) -> io::Result<()> {
    csv_preamble(out, cfg)?;
    writeln!(out, "{}", table.columns.join(","))?;
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(Cell::csv).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

fn write_json(out: &mut impl Write, cfg: &RunConfig, table: &Table) -> io::Result<()> {
    let q = |s: &str| serde_json::to_string(s).expect("strings serialize");
    writeln!(out, "{{")?;
    writeln!(out, "  \"library_version\": {},", q(mbi_core::VERSION))?;
    writeln!(out, "  \"config_hash\": {},", q(&cfg.hash()))?;
    writeln!(out, "  \"command\": {},", q(cfg.command.name()))?;
    let config: Vec<String> = cfg
        .canonical()
        .iter()
        .map(|(k, v)| format!("{}: {}", q(k), q(v)))
        .collect();
    writeln!(out, "  \"config\": {{{}}},", config.join(", "))?;
    writeln!(out, "  \"records\": [")?;
    for (i, row) in table.rows.iter().enumerate() {
        let fields: Vec<String> = table
            .columns
            .iter()
            .zip(row)
            .map(|(c, v)| format!("{}: {}", q(c), v.json()))
            .collect();
        let sep = if i + 1 < table.rows.len() { "," } else { "" };
        writeln!(out, "    {{{}}}{sep}", fields.join(", "))?;
    }
    writeln!(out, "  ]")?;
    writeln!(out, "}}")
}

/// Write `table` to `<out>/<stem>.<ext>` and return the path.
pub fn write_table(cfg: &RunConfig, stem: &str, table: &Table) -> io::Result<PathBuf> {
    let path = cfg.out.join(format!("{stem}.{}", cfg.format.extension()));
    let mut w = BufWriter::new(File::create(&path)?);
    match cfg.format {
        Format::Csv => write_csv(&mut w, cfg, table)?,
        Format::Json => write_json(&mut w, cfg, table)?,
    }
    w.flush()?;
    Ok(path)
}

pub fn ensure_dir(dir: &Path) -> io::Result<()> {
    std::fs::create_dir_all(dir)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells_format() {
        assert_eq!(Cell::F(0.1).csv(), "1.0000000000000001e-1");
        assert_eq!(Cell::F(f64::NAN).json(), "null");
        assert_eq!(Cell::S("a,b".into()).csv(), "\"a,b\"");
        assert_eq!(Cell::Missing.csv(), "");
        assert_eq!(Cell::S("x\"y".into()).json(), "\"x\\\"y\"");
    }
}
