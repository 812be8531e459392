//! Plain-text formats: intensity grids, coordinate files and flat
//! key-value configs.
//!
//! Grid files look like
//!
//! ```text
//! # comment
//! grid 112 112
//! extent -25 25 -5 42
//! 0.0 0.1 ...        # row 0 (y_min), left to right, then row 1, ...
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use shotdepth_core::ppsim::IntensityGrid;
use shotdepth_core::{CartesianPoint, PointPattern, Rect};

use crate::DataError;

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn read(path: &Path) -> Result<String, DataError> {
    fs::read_to_string(path).map_err(|e| DataError::Io { path: path.to_path_buf(), source: e })
}

fn parse_f64(tok: &str, path: &Path, line: usize) -> Result<f64, DataError> {
    tok.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| DataError::parse(path, line, format!("not a finite number: `{tok}`")))
}

pub fn parse_grid(text: &str, path: &Path) -> Result<IntensityGrid, DataError> {
    let mut dims = None;
    let mut extent = None;
    let mut cells = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        match toks.clone().next() {
            Some("grid") => {
                toks.next();
                let w: Vec<&str> = toks.collect();
                if w.len() != 2 {
                    return Err(DataError::parse(path, line_no, "expected `grid WIDTH HEIGHT`"));
                }
                let parse = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| DataError::parse(path, line_no, "grid size must be a positive integer"))
                };
                dims = Some((parse(w[0])?, parse(w[1])?));
            }
            Some("extent") => {
                toks.next();
                let v = toks.map(|t| parse_f64(t, path, line_no)).collect::<Result<Vec<_>, _>>()?;
                if v.len() != 4 {
                    return Err(DataError::parse(path, line_no, "expected `extent XMIN XMAX YMIN YMAX`"));
                }
                extent = Some(
                    Rect::new(v[0], v[1], v[2], v[3]).map_err(|e| DataError::parse(path, line_no, e.to_string()))?,
                );
            }
            _ => {
                if dims.is_none() || extent.is_none() {
                    return Err(DataError::parse(path, line_no, "cell values before `grid` and `extent` header lines"));
                }
                for t in toks {
                    cells.push(parse_f64(t, path, line_no)?);
                }
            }
        }
    }
    let (w, h) = dims.ok_or_else(|| DataError::parse(path, 0, "missing `grid` header"))?;
    let extent = extent.ok_or_else(|| DataError::parse(path, 0, "missing `extent` header"))?;
    if cells.len() != w * h {
        return Err(DataError::parse(path, 0, format!("expected {} cell values, found {}", w * h, cells.len())));
    }
    IntensityGrid::new(w, h, cells, extent).map_err(|e| DataError::parse(path, 0, e.to_string()))
}

pub fn read_grid(path: &Path) -> Result<IntensityGrid, DataError> {
    parse_grid(&read(path)?, path)
}

/// Serializes a grid; values use the shortest representation that parses
/// back to the same `f64`.
pub fn format_grid(grid: &IntensityGrid, comment: &str) -> String {
    let mut out = String::new();
    for line in comment.lines() {
        let _ = writeln!(out, "# {line}");
    }
    let e = grid.extent();
    let _ = writeln!(out, "grid {} {}", grid.width(), grid.height());
    let _ = writeln!(out, "extent {} {} {} {}", e.x_min, e.x_max, e.y_min, e.y_max);
    for row in grid.cells().chunks(grid.width()) {
        let line: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

/// Two coordinates per line separated by whitespace or a comma; `#` starts a
/// comment.
pub fn parse_points(text: &str, path: &Path) -> Result<PointPattern, DataError> {
    let mut pts = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).collect();
        if toks.len() != 2 {
            return Err(DataError::parse(path, i + 1, "expected two coordinates"));
        }
        pts.push(CartesianPoint::new(parse_f64(toks[0], path, i + 1)?, parse_f64(toks[1], path, i + 1)?));
    }
    PointPattern::from_points(pts).map_err(|e| DataError::parse(path, 0, e.to_string()))
}

pub fn read_points(path: &Path) -> Result<PointPattern, DataError> {
    parse_points(&read(path)?, path)
}

pub fn format_points(p: &PointPattern) -> String {
    let mut out = String::new();
    for q in p.points() {
        let _ = writeln!(out, "{:?} {:?}", q.x, q.y);
    }
    out
}

/// Flat `key = value` configuration; `#` comments and blank lines ignored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, String>,
    base: PathBuf,
}

impl Config {
    pub fn parse(text: &str, path: &Path) -> Result<Self, DataError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| DataError::parse(path, i + 1, "expected `key = value`"))?;
            let key = k.trim().to_ascii_lowercase();
            if entries.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(DataError::parse(path, i + 1, format!("duplicate key `{key}`")));
            }
        }
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Self { entries, base })
    }

    pub fn read(path: &Path) -> Result<Self, DataError> {
        Self::parse(&read(path)?, path)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_string(), value.into());
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Resolves a path value relative to the config file's directory.
    pub fn resolve(&self, value: &str) -> PathBuf {
        let p = Path::new(value);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }

    pub fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, DataError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| DataError::Config(format!("invalid value `{v}` for `{key}`"))),
        }
    }

    /// Comma-separated list value.
    pub fn list(&self, key: &str) -> Option<Vec<&str>> {
        self.get(key).map(|v| v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect())
    }
}
