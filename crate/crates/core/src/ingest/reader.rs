use std::collections::HashMap;
use std::io::Read;
use std::str::FromStr;

use super::{IngestError, IngestReport, Rejection, Table};

pub(super) enum RowError {
    Reject(String),
    Fatal(IngestError),
}

impl From<String> for RowError {
    fn from(reason: String) -> Self {
        RowError::Reject(reason)
    }
}

pub(super) struct Row<'a> {
    pub line: u64,
    record: &'a csv::StringRecord,
    header: &'a [String],
}

impl<'a> Row<'a> {
    /// Trimmed cell, `None` when empty.
    pub fn opt(&self, i: usize) -> Option<&'a str> {
        self.record.get(i).map(str::trim).filter(|s| !s.is_empty())
    }

    pub fn req(&self, i: usize) -> Result<&'a str, RowError> {
        self.opt(i)
            .ok_or_else(|| RowError::Reject(format!("{} is empty", self.header[i])))
    }

    pub fn parse_opt<T: FromStr>(&self, i: usize) -> Result<Option<T>, RowError> {
        match self.opt(i) {
            None => Ok(None),
            Some(s) => s
                .parse()
                .map(Some)
                .map_err(|_| RowError::Reject(format!("{} {s:?} is not a valid number", self.header[i]))),
        }
    }

    pub fn parse_req<T: FromStr>(&self, i: usize) -> Result<T, RowError> {
        self.parse_opt(i)?
            .ok_or_else(|| RowError::Reject(format!("{} is empty", self.header[i])))
    }

    /// Finite and `>= 0`, or absent.
    pub fn non_negative_opt(&self, i: usize) -> Result<Option<f64>, RowError> {
        let v: Option<f64> = self.parse_opt(i)?;
        match v {
            Some(x) if !(x.is_finite() && x >= 0.0) => Err(RowError::Reject(format!(
                "{} must be a non-negative number, got {x}",
                self.header[i]
            ))),
            v => Ok(v),
        }
    }

    pub fn non_negative_req(&self, i: usize) -> Result<f64, RowError> {
        self.non_negative_opt(i)?
            .ok_or_else(|| RowError::Reject(format!("{} is empty", self.header[i])))
    }
}

/// Tracks first occurrence of primary keys; a repeat is fatal.
pub(super) struct KeyGuard {
    table: Table,
    seen: HashMap<String, u64>,
}

impl KeyGuard {
    pub fn new(table: Table) -> Self {
        KeyGuard {
            table,
            seen: HashMap::new(),
        }
    }

    pub fn insert(&mut self, key: String, line: u64) -> Result<(), RowError> {
        if let Some(&first_line) = self.seen.get(&key) {
            return Err(RowError::Fatal(IngestError::DuplicateKey {
                table: self.table,
                key,
                line,
                first_line,
            }));
        }
        self.seen.insert(key, line);
        Ok(())
    }
}

/// Reads every data row, checking the header against `accepted_headers`
/// (exact match after trimming). `f` receives the index of the matched
/// header variant. Returns the report with `accepted` and `total_rows`
/// counted from `f`'s verdicts.
pub(super) fn for_each_row<R: Read>(
    table: Table,
    input: R,
    accepted_headers: &[&[&str]],
    mut f: impl FnMut(usize, &Row<'_>) -> Result<(), RowError>,
) -> Result<IngestReport, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(input);
    let header: Vec<String> = reader
        .headers()
        .map_err(|source| IngestError::Csv {
            table,
            line: 1,
            source,
        })?
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let h = h.trim();
            if i == 0 { h.trim_start_matches('\u{feff}') } else { h }.to_string()
        })
        .collect();
    let variant = accepted_headers
        .iter()
        .position(|expected| header.iter().map(String::as_str).eq(expected.iter().copied()))
        .ok_or_else(|| IngestError::HeaderMismatch {
            table,
            expected: accepted_headers[0].join(","),
            found: header.join(","),
        })?;
    let width = header.len();

    let mut report = IngestReport::new(table);
    let mut record = csv::StringRecord::new();
    loop {
        let line = reader.position().line() ;
        match reader.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => {
                if let csv::ErrorKind::Utf8 { pos, .. } = e.kind() {
                    let line = pos.as_ref().map_or(line, |p| p.line());
                    report.total_rows += 1;
                    report.rejected.push(Rejection {
                        line,
                        reason: "row is not valid UTF-8".into(),
                    });
                    continue;
                }
                return Err(IngestError::Csv {
                    table,
                    line,
                    source: e,
                });
            }
        }
        let line = record.position().map_or(line, |p| p.line());
        report.total_rows += 1;
        if record.len() != width {
            report.rejected.push(Rejection {
                line,
                reason: format!("expected {width} fields, found {}", record.len()),
            });
            continue;
        }
        let row = Row {
            line,
            record: &record,
            header: &header,
        };
        match f(variant, &row) {
            Ok(()) => report.accepted += 1,
            Err(RowError::Reject(reason)) => report.rejected.push(Rejection { line, reason }),
            Err(RowError::Fatal(e)) => return Err(e),
        }
    }
    Ok(report)
}
