use std::fmt::Write as _;
use std::path::PathBuf;

use serde_json::{json, Value};

use super::config::{Format, RunConfig};
use super::CliError;

/// Float with 17 significant digits, independent of locale.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv { text: format!("{}\n", header.join(",")) }
    }

    pub fn row(&mut self, cells: &[Cell]) {
        let line: Vec<String> = cells.iter().map(Cell::render).collect();
        writeln!(self.text, "{}", line.join(",")).expect("writing to a String");
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

pub enum Cell {
    Int(usize),
    Float(f64),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt_float(*v),
        }
    }
}

/// Everything one command produces; written in one go by [`Report::write`].
pub struct Report {
    pub csv: Option<String>,
    pub results: Value,
    pub derived: Value,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn document(&self, cfg: &RunConfig) -> Value {
        json!({
            "config": cfg,
            "results": self.results,
            "derived": self.derived,
            "warnings": self.warnings,
        })
    }

    /// Writes the CSV and its sidecar, or a single JSON document. Returns
    /// the paths written.
    pub fn write(&self, cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
        let mut doc = serde_json::to_string_pretty(&self.document(cfg)).expect("report serializes");
        doc.push('\n');
        let io = |path: &PathBuf, e: std::io::Error| CliError::Io(format!("cannot write {}: {e}", path.display()));
        match (&self.csv, cfg.format) {
            (Some(csv), Format::Csv) => {
                let sidecar = cfg.sidecar_path();
                if sidecar == cfg.out {
                    return Err(CliError::Usage(format!(
                        "CSV output {} would collide with its JSON sidecar",
                        cfg.out.display()
                    )));
                }
                std::fs::write(&cfg.out, csv).map_err(|e| io(&cfg.out, e))?;
                std::fs::write(&sidecar, doc).map_err(|e| io(&sidecar, e))?;
                Ok(vec![cfg.out.clone(), sidecar])
            }
            _ => {
                std::fs::write(&cfg.out, doc).map_err(|e| io(&cfg.out, e))?;
                Ok(vec![cfg.out.clone()])
            }
        }
    }
}
