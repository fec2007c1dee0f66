use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;

use chrono::NaiveDate;

use super::reader::{for_each_row, KeyGuard, RowError};
use super::{
    AirframeRecord, EngineCodeRecord, FlightRecord, IngestError, IngestReport, Rejection, Table,
    TailEngineRecord, BADA_DISTANCE_COLUMN, DEFAULT_ENGINE_COUNT,
};
use crate::emissions::{CcdProfile, EngineLtoFactors, Knot, Mode};
use crate::gas::{Gas, GasVector};

fn open(table: Table, path: &Path) -> Result<BufReader<File>, IngestError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| IngestError::Io {
            table,
            path: path.to_path_buf(),
            source,
        })
}

fn airport(code: &str, column: &str) -> Result<String, RowError> {
    let code = code.to_ascii_uppercase();
    if code.len() == 3 && code.bytes().all(|b| b.is_ascii_alphanumeric()) {
        Ok(code)
    } else {
        Err(RowError::Reject(format!("{column} {code:?} is not a 3-character airport code")))
    }
}

fn tail(s: &str) -> String {
    s.to_ascii_uppercase()
}

pub fn parse_ontime(path: &Path) -> Result<(Vec<FlightRecord>, IngestReport), IngestError> {
    read_ontime(open(Table::Ontime, path)?)
}

/// Flights in input order. Rows without a tail number or air time are kept
/// and counted in `report.flagged`.
pub fn read_ontime<R: Read>(input: R) -> Result<(Vec<FlightRecord>, IngestReport), IngestError> {
    let mut flights = Vec::new();
    let mut flagged = 0;
    let mut report = for_each_row(Table::Ontime, input, &[Table::Ontime.header()], |_, row| {
        let date = row.req(0)?;
        let flight_date = NaiveDate::parse_from_str(date, "%Y-%m-%d")
            .map_err(|_| format!("flight_date {date:?} is not YYYY-MM-DD"))?;
        let origin = airport(row.req(4)?, "origin")?;
        let destination = airport(row.req(5)?, "dest")?;
        if origin == destination {
            return Err(format!("origin and dest are both {origin}").into());
        }
        let distance_mi: f64 = row.parse_req(9)?;
        if !(distance_mi.is_finite() && distance_mi > 0.0) {
            return Err(format!("distance_mi must be positive, got {distance_mi}").into());
        }
        let record = FlightRecord {
            flight_date,
            carrier: row.req(1)?.to_string(),
            flight_number: row.req(2)?.to_string(),
            tail_number: row.opt(3).map(tail),
            origin,
            destination,
            air_time_min: row.non_negative_opt(6)?,
            taxi_in_min: row.non_negative_opt(7)?,
            taxi_out_min: row.non_negative_opt(8)?,
            distance_mi,
        };
        if record.is_incomputable() {
            flagged += 1;
        }
        flights.push(record);
        Ok(())
    })?;
    report.flagged = flagged;
    Ok((flights, report))
}

pub fn parse_b43(path: &Path) -> Result<(Vec<AirframeRecord>, IngestReport), IngestError> {
    read_b43(open(Table::B43, path)?)
}

/// Airframes sorted by tail number. A repeated tail number is fatal.
pub fn read_b43<R: Read>(input: R) -> Result<(Vec<AirframeRecord>, IngestReport), IngestError> {
    let mut keys = KeyGuard::new(Table::B43);
    let mut out = Vec::new();
    let report = for_each_row(Table::B43, input, &[Table::B43.header()], |_, row| {
        let tail_number = tail(row.req(0)?);
        let raw_type_designator = row.req(1)?.to_string();
        let seat_count: u32 = row.parse_req(2)?;
        if seat_count == 0 {
            return Err("seat_count must be at least 1".to_string().into());
        }
        let engine_count: u8 = row.parse_opt(3)?.unwrap_or(DEFAULT_ENGINE_COUNT);
        if !(1..=4).contains(&engine_count) {
            return Err(format!("engine_count must be 1 to 4, got {engine_count}").into());
        }
        keys.insert(tail_number.clone(), row.line)?;
        out.push(AirframeRecord {
            tail_number,
            raw_type_designator,
            seat_count,
            engine_count,
        });
        Ok(())
    })?;
    out.sort_by(|a, b| a.tail_number.cmp(&b.tail_number));
    Ok((out, report))
}

pub fn parse_tail_registry(path: &Path) -> Result<(Vec<TailEngineRecord>, IngestReport), IngestError> {
    read_tail_registry(open(Table::TailRegistry, path)?)
}

pub fn read_tail_registry<R: Read>(input: R) -> Result<(Vec<TailEngineRecord>, IngestReport), IngestError> {
    let mut keys = KeyGuard::new(Table::TailRegistry);
    let mut out = Vec::new();
    let report = for_each_row(Table::TailRegistry, input, &[Table::TailRegistry.header()], |_, row| {
        let tail_number = tail(row.req(0)?);
        let engine_designation = row.req(1)?.to_string();
        keys.insert(tail_number.clone(), row.line)?;
        out.push(TailEngineRecord {
            tail_number,
            engine_designation,
        });
        Ok(())
    })?;
    out.sort_by(|a, b| a.tail_number.cmp(&b.tail_number));
    Ok((out, report))
}

pub fn parse_engine_codes(path: &Path) -> Result<(Vec<EngineCodeRecord>, IngestReport), IngestError> {
    read_engine_codes(open(Table::EngineCodes, path)?)
}

pub fn read_engine_codes<R: Read>(input: R) -> Result<(Vec<EngineCodeRecord>, IngestReport), IngestError> {
    let mut keys = KeyGuard::new(Table::EngineCodes);
    let mut out = Vec::new();
    let report = for_each_row(Table::EngineCodes, input, &[Table::EngineCodes.header()], |_, row| {
        let faa_code = row.req(0)?.to_string();
        let designation = row.req(1)?.to_string();
        keys.insert(faa_code.clone(), row.line)?;
        out.push(EngineCodeRecord { faa_code, designation });
        Ok(())
    })?;
    out.sort_by(|a, b| a.faa_code.cmp(&b.faa_code));
    Ok((out, report))
}

pub fn parse_icao_databank(path: &Path) -> Result<(Vec<EngineLtoFactors>, IngestReport), IngestError> {
    read_icao_databank(open(Table::IcaoEngines, path)?)
}

/// Engines sorted by UID, from the long-form table (one row per gas and
/// mode). A repeated `(engine_uid, gas, mode)` is fatal; an engine missing
/// any of its 16 rates has all its rows rejected.
pub fn read_icao_databank<R: Read>(input: R) -> Result<(Vec<EngineLtoFactors>, IngestReport), IngestError> {
    let mut keys = KeyGuard::new(Table::IcaoEngines);
    // uid -> (line, gas, mode, rate)
    let mut cells: BTreeMap<String, Vec<(u64, Gas, Mode, f64)>> = BTreeMap::new();
    let mut report = for_each_row(Table::IcaoEngines, input, &[Table::IcaoEngines.header()], |_, row| {
        let uid = row.req(0)?.to_string();
        let gas: Gas = row.req(1)?.parse()?;
        let mode: Mode = row.req(2)?.parse()?;
        let rate = row.non_negative_req(3)?;
        keys.insert(format!("{uid}/{gas}/{mode}"), row.line)?;
        cells.entry(uid).or_default().push((row.line, gas, mode, rate));
        Ok(())
    })?;

    let mut engines = Vec::new();
    for (uid, rows) in cells {
        let mut rates = [[None::<f64>; 4]; 4];
        for &(_, gas, mode, rate) in &rows {
            rates[mode as usize][gas as usize] = Some(rate);
        }
        let missing: Vec<String> = Mode::ALL
            .iter()
            .flat_map(|&m| Gas::ALL.iter().map(move |&g| (m, g)))
            .filter(|&(m, g)| rates[m as usize][g as usize].is_none())
            .map(|(m, g)| format!("{g}/{m}"))
            .collect();
        if missing.is_empty() {
            let per_mode = rates.map(|r| GasVector::from_fn(|g| r[g as usize].unwrap_or_default()));
            engines.push(EngineLtoFactors::new(uid, per_mode));
        } else {
            let reason = format!("engine {uid} is incomplete: missing {}", missing.join(", "));
            reject_group(&mut report, rows.iter().map(|r| r.0), reason);
        }
    }
    Ok((engines, report))
}

pub fn parse_bada_ccd(path: &Path) -> Result<(Vec<CcdProfile>, IngestReport), IngestError> {
    read_bada_ccd(open(Table::BadaCcd, path)?)
}

/// Profiles sorted by airframe type. A type with fewer than two knots or a
/// repeated duration has all its rows rejected.
pub fn read_bada_ccd<R: Read>(input: R) -> Result<(Vec<CcdProfile>, IngestReport), IngestError> {
    let base = Table::BadaCcd.header();
    let with_distance: Vec<&str> = base.iter().copied().chain([BADA_DISTANCE_COLUMN]).collect();
    let mut groups: BTreeMap<String, Vec<(u64, Knot)>> = BTreeMap::new();
    let mut report = for_each_row(Table::BadaCcd, input, &[base, &with_distance], |variant, row| {
        let canonical_type = row.req(0)?.to_ascii_uppercase();
        let duration_min: f64 = row.parse_req(1)?;
        if !(duration_min.is_finite() && duration_min > 0.0) {
            return Err(format!("duration_min must be positive, got {duration_min}").into());
        }
        let emissions = GasVector::new(
            row.non_negative_req(2)?,
            row.non_negative_req(3)?,
            row.non_negative_req(4)?,
            row.non_negative_req(5)?,
        );
        let distance_nm = if variant == 1 {
            let d: f64 = row.parse_req(6)?;
            if !(d.is_finite() && d > 0.0) {
                return Err(format!("distance_nm must be positive, got {d}").into());
            }
            Some(d)
        } else {
            None
        };
        groups.entry(canonical_type).or_default().push((
            row.line,
            Knot {
                duration_min,
                distance_nm,
                emissions,
            },
        ));
        Ok(())
    })?;

    let mut profiles = Vec::new();
    for (canonical_type, rows) in groups {
        let knots = rows.iter().map(|(_, k)| *k).collect();
        match CcdProfile::new(canonical_type.clone(), knots) {
            Ok(p) => profiles.push(p),
            Err(e) => {
                let reason = format!("profile {canonical_type} rejected: {e}");
                reject_group(&mut report, rows.iter().map(|r| r.0), reason);
            }
        }
    }
    Ok((profiles, report))
}

fn reject_group(report: &mut IngestReport, lines: impl IntoIterator<Item = u64>, reason: String) {
    for line in lines {
        report.accepted -= 1;
        report.rejected.push(Rejection {
            line,
            reason: reason.clone(),
        });
    }
    report.rejected.sort_by_key(|r| r.line);
}
