use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

/// Which artifact kinds to write.
#[derive(Debug, Clone, Copy, Default)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
    pub dot: bool,
}

impl Formats {
    pub fn parse(s: &str) -> Result<Formats, String> {
        let mut f = Formats::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "csv" => f.csv = true,
                "json" => f.json = true,
                "dot" => f.dot = true,
                other => return Err(format!("unknown format `{other}` (expected csv, json or dot)")),
            }
        }
        Ok(f)
    }
}

/// Where the input came from, recorded at the top of every CSV.
#[derive(Debug, Clone)]
pub struct Provenance {
    pub sha256: String,
    pub grid: usize,
}

impl Provenance {
    pub fn new(source: &[u8], grid: usize) -> Provenance {
        Provenance { sha256: hex::encode(Sha256::digest(source)), grid }
    }

    fn line(&self) -> String {
        format!("# spec_sha256={} grid={}", self.sha256, self.grid)
    }
}

/// CSV table with a header row.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Table {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn render(&self, prov: &Provenance) -> String {
        let mut s = prov.line();
        s.push('\n');
        s.push_str(&self.header.join(","));
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.iter().map(|c| escape(c)).collect::<Vec<_>>().join(","));
            s.push('\n');
        }
        s
    }
}

fn escape(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else if x > 0.0 {
        "inf".into()
    } else if x < 0.0 {
        "-inf".into()
    } else {
        "nan".into()
    }
}

/// Space-separated list, e.g. of bundle labels.
pub fn list<T: Display>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Writes artifacts into the output directory, if one was given.
pub struct Sink {
    dir: Option<PathBuf>,
    pub formats: Formats,
}

impl Sink {
    pub fn new(dir: Option<PathBuf>, formats: Formats) -> Result<Sink, CliError> {
        if let Some(d) = &dir {
            fs::create_dir_all(d).map_err(|e| CliError::io(d, e))?;
        }
        Ok(Sink { dir, formats })
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn write(&self, name: &str, contents: &str) -> Result<(), CliError> {
        let Some(d) = &self.dir else { return Ok(()) };
        let path = d.join(name);
        fs::write(&path, contents).map_err(|e| CliError::io(&path, e))
    }

    pub fn csv(&self, name: &str, table: &Table, prov: &Provenance) -> Result<(), CliError> {
        if self.formats.csv {
            self.write(name, &table.render(prov))?;
        }
        Ok(())
    }

    pub fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<(), CliError> {
        if self.formats.json {
            let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
            s.push('\n');
            self.write(name, &s)?;
        }
        Ok(())
    }

    pub fn dot(&self, name: &str, dot: &str) -> Result<(), CliError> {
        if self.formats.dot {
            self.write(name, dot)?;
        }
        Ok(())
    }
}
