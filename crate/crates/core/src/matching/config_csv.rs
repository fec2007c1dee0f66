//! Loader shared by the small matching configuration tables.

use std::fs::File;
use std::io::{BufReader, Read};
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigTableError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("header mismatch: expected `{expected}`, found `{found}`")]
    HeaderMismatch { expected: String, found: String },
    #[error("line {line}: {reason}")]
    Invalid { line: u64, reason: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("{}: {source}", path.display())]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<ConfigTableError>,
    },
}

impl ConfigTableError {
    pub(crate) fn with_path(self, path: &Path) -> Self {
        match self {
            e @ (ConfigTableError::Io { .. } | ConfigTableError::InFile { .. }) => e,
            e => ConfigTableError::InFile {
                path: path.to_path_buf(),
                source: Box::new(e),
            },
        }
    }
}

pub(crate) fn open(path: &Path) -> Result<BufReader<File>, ConfigTableError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| ConfigTableError::Io {
            path: path.to_path_buf(),
            source,
        })
}

/// Rows with their line numbers, after an exact header check.
pub(crate) fn read<R: Read>(input: R, header: &[&str]) -> Result<Vec<(u64, csv::StringRecord)>, ConfigTableError> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(input);
    let found: Vec<String> = reader
        .headers()?
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let h = h.trim();
            if i == 0 { h.trim_start_matches('\u{feff}') } else { h }.to_string()
        })
        .collect();
    if !found.iter().map(String::as_str).eq(header.iter().copied()) {
        return Err(ConfigTableError::HeaderMismatch {
            expected: header.join(","),
            found: found.join(","),
        });
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != header.len() {
            return Err(ConfigTableError::Invalid {
                line,
                reason: format!("expected {} fields, found {}", header.len(), record.len()),
            });
        }
        rows.push((line, record));
    }
    Ok(rows)
}
