//! Run manifests and tab-separated reports.
//!
//! A report is a block of `# key: value` manifest lines followed by one or
//! more tables. Each table starts with a `# table: NAME` line and a header
//! row. With `SOURCE_DATE_EPOCH` set the timestamp is fixed, so identical
//! inputs give byte-identical files.

use std::fmt::{self, Write as _};
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use chrono::{DateTime, SecondsFormat, Utc};
use sha2::{Digest, Sha256};

use crate::DataError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    /// Effective settings after defaults and overrides.
    pub config: Vec<(String, String)>,
    pub seed: Option<u64>,
    pub version: String,
    pub inputs: Vec<InputDigest>,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: &str, args: Vec<String>) -> Self {
        Self {
            command: command.to_string(),
            args,
            config: Vec::new(),
            seed: None,
            version: VERSION.to_string(),
            inputs: Vec::new(),
            timestamp: timestamp(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl fmt::Display) {
        let value = value.to_string();
        match self.config.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.config.push((key.to_string(), value)),
        }
    }

    pub fn add_input(&mut self, path: &Path) -> Result<(), DataError> {
        let bytes = fs::read(path).map_err(|e| DataError::Io { path: path.to_path_buf(), source: e })?;
        self.add_input_bytes(&path.display().to_string(), &bytes);
        Ok(())
    }

    pub fn add_input_bytes(&mut self, name: &str, bytes: &[u8]) {
        if self.inputs.iter().any(|d| d.path == name) {
            return;
        }
        self.inputs.push(InputDigest { path: name.to_string(), sha256: sha256_hex(bytes) });
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut s = String::with_capacity(64);
    for b in digest.iter() {
        let _ = write!(s, "{b:02x}");
    }
    s
}

/// RFC 3339 UTC time, taken from `SOURCE_DATE_EPOCH` when it holds an
/// integer number of seconds.
pub fn timestamp() -> String {
    let fixed = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.trim().parse::<i64>().ok())
        .and_then(|secs| DateTime::<Utc>::from_timestamp(secs, 0));
    fixed.unwrap_or_else(Utc::now).to_rfc3339_opts(SecondsFormat::Secs, true)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.to_string(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Column values of `name`, if present.
    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i].as_str()).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub manifest: RunManifest,
    /// Free-form `#` lines printed after the manifest.
    pub notes: Vec<String>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(manifest: RunManifest) -> Self {
        Self { manifest, notes: Vec::new(), tables: Vec::new() }
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn write_to(&self, out: Option<&PathBuf>) -> Result<(), DataError> {
        let text = self.to_string();
        match out {
            Some(path) => fs::write(path, text).map_err(|e| DataError::Io { path: path.clone(), source: e }),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(text.as_bytes())
                    .and_then(|_| stdout.flush())
                    .map_err(|e| DataError::Io { path: PathBuf::from("<stdout>"), source: e })
            }
        }
    }
}

fn clean(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.manifest;
        writeln!(f, "# shotdepth {}", m.version)?;
        writeln!(f, "# command: {}", m.command)?;
        writeln!(f, "# args: {}", clean(&m.args.join(" ")))?;
        if let Some(seed) = m.seed {
            writeln!(f, "# seed: {seed}")?;
        }
        for (k, v) in &m.config {
            writeln!(f, "# config.{k}: {}", clean(v))?;
        }
        for d in &m.inputs {
            writeln!(f, "# input: {} sha256={}", clean(&d.path), d.sha256)?;
        }
        writeln!(f, "# timestamp: {}", m.timestamp)?;
        for n in &self.notes {
            writeln!(f, "# {}", clean(n))?;
        }
        for t in &self.tables {
            writeln!(f, "# table: {}", t.name)?;
            writeln!(f, "{}", t.header.join("\t"))?;
            for row in &t.rows {
                let cells: Vec<String> = row.iter().map(|c| clean(c)).collect();
                writeln!(f, "{}", cells.join("\t"))?;
            }
        }
        Ok(())
    }
}

/// Shortest round-trip representation, in exponent form below 1e-4;
/// `NA` for a missing value.
pub fn num(v: Option<f64>) -> String {
    match v {
        Some(v) if v != 0.0 && v.abs() < 1e-4 => format!("{v:e}"),
        Some(v) => format!("{v}"),
        None => "NA".to_string(),
    }
}

/// Splits a report back into its tables, keyed by name. Lines starting
/// with `#` other than `# table:` are skipped.
pub fn parse_tables(text: &str) -> Vec<Table> {
    let mut tables: Vec<Table> = Vec::new();
    let mut want_header = false;
    for line in text.lines() {
        if let Some(name) = line.strip_prefix("# table: ") {
            tables.push(Table { name: name.to_string(), ..Table::default() });
            want_header = true;
        } else if line.starts_with('#') {
            continue;
        } else if let Some(t) = tables.last_mut() {
            let cells: Vec<String> = line.split('\t').map(str::to_string).collect();
            if want_header {
                t.header = cells;
                want_header = false;
            } else {
                t.rows.push(cells);
            }
        }
    }
    tables
}
