//! Parsing of the six input tables.
//!
//! Every table is comma-delimited UTF-8 text with a fixed header row. An
//! empty cell means the value is absent. Malformed rows are rejected and
//! listed in the [`IngestReport`] with their line number; only a header
//! mismatch or a duplicate primary key aborts the parse.
//!
//! | table | header |
//! |-------|--------|
//! | on-time flights | `flight_date,carrier,flight_number,tail_number,origin,dest,air_time_min,taxi_in_min,taxi_out_min,distance_mi` |
//! | B-43 inventory | `tail_number,type_designator,seat_count,engine_count` |
//! | FAA tail registry | `tail_number,engine_designation` |
//! | FAA engine codes | `faa_code,designation` |
//! | ICAO engine databank | `engine_uid,gas,mode,rate_kg_per_s` (16 rows per engine) |
//! | CCD profiles | `canonical_type,duration_min,hc_kg,co2_kg,co_kg,nox_kg[,distance_nm]` |

mod parse;
mod reader;
mod write;

use std::fmt;
use std::path::PathBuf;

use chrono::NaiveDate;
use thiserror::Error;

pub use parse::{
    parse_b43, parse_bada_ccd, parse_engine_codes, parse_icao_databank, parse_ontime,
    parse_tail_registry, read_b43, read_bada_ccd, read_engine_codes, read_icao_databank,
    read_ontime, read_tail_registry,
};
pub use write::{
    write_b43, write_bada_ccd, write_engine_codes, write_icao_databank, write_ontime,
    write_tail_registry,
};

/// The six input tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Table {
    Ontime,
    B43,
    TailRegistry,
    EngineCodes,
    IcaoEngines,
    BadaCcd,
}

impl Table {
    pub const ALL: [Table; 6] = [
        Table::Ontime,
        Table::B43,
        Table::TailRegistry,
        Table::EngineCodes,
        Table::IcaoEngines,
        Table::BadaCcd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Table::Ontime => "ontime",
            Table::B43 => "b43",
            Table::TailRegistry => "tail_registry",
            Table::EngineCodes => "engine_codes",
            Table::IcaoEngines => "icao_engines",
            Table::BadaCcd => "bada_ccd",
        }
    }

    pub fn header(self) -> &'static [&'static str] {
        match self {
            Table::Ontime => &[
                "flight_date",
                "carrier",
                "flight_number",
                "tail_number",
                "origin",
                "dest",
                "air_time_min",
                "taxi_in_min",
                "taxi_out_min",
                "distance_mi",
            ],
            Table::B43 => &["tail_number", "type_designator", "seat_count", "engine_count"],
            Table::TailRegistry => &["tail_number", "engine_designation"],
            Table::EngineCodes => &["faa_code", "designation"],
            Table::IcaoEngines => &["engine_uid", "gas", "mode", "rate_kg_per_s"],
            Table::BadaCcd => &["canonical_type", "duration_min", "hc_kg", "co2_kg", "co_kg", "nox_kg"],
        }
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Optional trailing column of the CCD table keying knots by distance.
pub const BADA_DISTANCE_COLUMN: &str = "distance_nm";

/// One on-time performance row.
#[derive(Debug, Clone, PartialEq)]
pub struct FlightRecord {
    pub flight_date: NaiveDate,
    pub carrier: String,
    pub flight_number: String,
    pub tail_number: Option<String>,
    pub origin: String,
    pub destination: String,
    pub air_time_min: Option<f64>,
    pub taxi_in_min: Option<f64>,
    pub taxi_out_min: Option<f64>,
    pub distance_mi: f64,
}

impl FlightRecord {
    /// A flight without a tail number or air time cannot be computed.
    pub fn is_incomputable(&self) -> bool {
        self.tail_number.is_none() || self.air_time_min.is_none()
    }
}

/// One aircraft from the B-43 inventory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AirframeRecord {
    pub tail_number: String,
    /// As reported, e.g. `737-8NG`.
    pub raw_type_designator: String,
    pub seat_count: u32,
    pub engine_count: u8,
}

/// Default engine count when the B-43 row leaves it blank.
pub const DEFAULT_ENGINE_COUNT: u8 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailEngineRecord {
    pub tail_number: String,
    /// FAA engine code or free-text designation.
    pub engine_designation: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineCodeRecord {
    pub faa_code: String,
    pub designation: String,
}

/// A row that was not accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub line: u64,
    pub reason: String,
}

/// Row accounting for one table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestReport {
    pub table: Table,
    pub total_rows: usize,
    pub accepted: usize,
    pub rejected: Vec<Rejection>,
    /// Accepted rows that are kept but cannot be computed (on-time table
    /// only: blank tail number or air time).
    pub flagged: usize,
}

impl IngestReport {
    pub fn new(table: Table) -> Self {
        IngestReport {
            table,
            total_rows: 0,
            accepted: 0,
            rejected: Vec::new(),
            flagged: 0,
        }
    }

    pub fn is_balanced(&self) -> bool {
        self.accepted + self.rejected.len() == self.total_rows
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{table}: cannot read {}: {source}", path.display())]
    Io {
        table: Table,
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{table}: header mismatch: expected `{expected}`, found `{found}`")]
    HeaderMismatch {
        table: Table,
        expected: String,
        found: String,
    },
    #[error("{table}: duplicate key {key:?} at line {line} (first seen at line {first_line})")]
    DuplicateKey {
        table: Table,
        key: String,
        line: u64,
        first_line: u64,
    },
    #[error("{table}: line {line}: {source}")]
    Csv {
        table: Table,
        line: u64,
        #[source]
        source: csv::Error,
    },
}

impl IngestError {
    pub fn table(&self) -> Table {
        match self {
            IngestError::Io { table, .. }
            | IngestError::HeaderMismatch { table, .. }
            | IngestError::DuplicateKey { table, .. }
            | IngestError::Csv { table, .. } => *table,
        }
    }
}
