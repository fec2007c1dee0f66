//! Serialization back to the input schemas. Numbers are written in their
//! shortest round-trip form so a re-parse reproduces the same values.

use std::io::Write;

use super::{AirframeRecord, EngineCodeRecord, FlightRecord, Table, TailEngineRecord, BADA_DISTANCE_COLUMN};
use crate::emissions::{CcdProfile, EngineLtoFactors, Mode};
use crate::gas::Gas;

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_ontime<W: Write>(out: W, flights: &[FlightRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(Table::Ontime.header())?;
    for f in flights {
        w.write_record([
            f.flight_date.format("%Y-%m-%d").to_string(),
            f.carrier.clone(),
            f.flight_number.clone(),
            f.tail_number.clone().unwrap_or_default(),
            f.origin.clone(),
            f.destination.clone(),
            opt(f.air_time_min),
            opt(f.taxi_in_min),
            opt(f.taxi_out_min),
            f.distance_mi.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_b43<W: Write>(out: W, airframes: &[AirframeRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(Table::B43.header())?;
    for a in airframes {
        w.write_record([
            a.tail_number.clone(),
            a.raw_type_designator.clone(),
            a.seat_count.to_string(),
            a.engine_count.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_tail_registry<W: Write>(out: W, rows: &[TailEngineRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(Table::TailRegistry.header())?;
    for r in rows {
        w.write_record([&r.tail_number, &r.engine_designation])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_engine_codes<W: Write>(out: W, rows: &[EngineCodeRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(Table::EngineCodes.header())?;
    for r in rows {
        w.write_record([&r.faa_code, &r.designation])?;
    }
    w.flush()?;
    Ok(())
}

/// Long form: 16 rows per engine, mode-major.
pub fn write_icao_databank<W: Write>(out: W, engines: &[EngineLtoFactors]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(Table::IcaoEngines.header())?;
    for e in engines {
        for mode in Mode::ALL {
            for gas in Gas::ALL {
                w.write_record([
                    e.engine_uid.as_str(),
                    gas.as_str(),
                    mode.as_str(),
                    &e.rate(gas, mode).to_string(),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes the distance column only when every profile carries one.
pub fn write_bada_ccd<W: Write>(out: W, profiles: &[CcdProfile]) -> csv::Result<()> {
    let with_distance = !profiles.is_empty() && profiles.iter().all(CcdProfile::has_distance_axis);
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = Table::BadaCcd.header().to_vec();
    if with_distance {
        header.push(BADA_DISTANCE_COLUMN);
    }
    w.write_record(&header)?;
    for p in profiles {
        for k in p.knots() {
            let mut row = vec![p.canonical_type.clone(), k.duration_min.to_string()];
            row.extend(Gas::ALL.iter().map(|&g| k.emissions[g].to_string()));
            if with_distance {
                row.push(opt(k.distance_nm));
            }
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}
