use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use super::experiments::Report;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Dot,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Dot => "dot",
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "dot" => Ok(Format::Dot),
            _ => Err(Error::Parse(format!("unknown format `{s}`"))),
        }
    }
}

/// Pretty JSON with a trailing newline. Field order follows declaration order.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

/// One CSV record per row, with a header from the row's field names.
pub fn to_csv<R: Serialize>(rows: &[R]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, text)?;
    Ok(())
}

impl Report {
    /// Per-seed (or per-item) rows as CSV.
    pub fn csv(&self) -> Result<String> {
        match self {
            Report::MainTheorem(r) => to_csv(&r.rows),
            Report::SupConjugates(r) => to_csv(&r.rows),
            Report::WreathCounterexample(r) => to_csv(&r.folner),
            Report::CogrowthSweep(r) => to_csv(&r.rows),
        }
    }
}

/// Writes `<stem>.json` and `<stem>.csv` and returns their paths.
pub fn export(report: &Report, stem: &Path, formats: &[Format]) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for &f in formats {
        let text = match f {
            Format::Json => to_json(report)?,
            Format::Csv => report.csv()?,
            Format::Dot => {
                return Err(Error::Invalid(
                    "reports have no DOT form; export balls instead".into(),
                ))
            }
        };
        let path = stem.with_extension(f.extension());
        write_text(&path, &text)?;
        written.push(path);
    }
    Ok(written)
}
