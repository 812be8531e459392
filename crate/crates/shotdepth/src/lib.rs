//! File formats, the shot-chart pipeline, benchmark grouping and the
//! command-line front end built on `shotdepth-core`.

use std::fmt;
use std::path::PathBuf;

pub mod classify;
pub mod cli;
pub mod exec;
pub mod io;
pub mod plot;
pub mod report;
pub mod shotdata;

/// Problems with input data, as opposed to command-line usage.
#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}", ParseLocation(path, *line, msg))]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] shotdepth_core::Error),
    #[error("{0}")]
    Other(String),
}

impl DataError {
    pub(crate) fn parse(path: &std::path::Path, line: usize, msg: impl Into<String>) -> Self {
        DataError::Parse { path: path.to_path_buf(), line, msg: msg.into() }
    }
}

struct ParseLocation<'a>(&'a PathBuf, usize, &'a String);

impl fmt::Display for ParseLocation<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1 == 0 {
            write!(f, "{}: {}", self.0.display(), self.2)
        } else {
            write!(f, "{}:{}: {}", self.0.display(), self.1, self.2)
        }
    }
}
