use std::fmt;
use std::str::FromStr;

use super::ccd::{ccd_interpolate_by, CcdTable, InterpolationKey, RangeFlag, NM_PER_STATUTE_MILE};
use super::co2e::{co2e, Co2eFactors};
use super::lto::{lto_breakdown, EngineDatabank, LtoTimes};
use crate::gas::GasVector;
use crate::matching::{IncomputableCause, ResolvedFlight};

/// How ICAO per-engine rates are scaled to the aircraft.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EngineMultiplier {
    /// Rates applied once per aircraft (multiplier 1).
    #[default]
    PaperCompatible,
    /// Rates multiplied by the aircraft's engine count.
    PerEngine,
}

impl EngineMultiplier {
    pub fn value(self, engine_count: u8) -> f64 {
        match self {
            EngineMultiplier::PaperCompatible => 1.0,
            EngineMultiplier::PerEngine => f64::from(engine_count),
        }
    }
}

impl FromStr for EngineMultiplier {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "paper-compatible" => Ok(EngineMultiplier::PaperCompatible),
            "per-engine" => Ok(EngineMultiplier::PerEngine),
            other => Err(format!(
                "unknown engine multiplier mode {other:?} (expected paper-compatible or per-engine)"
            )),
        }
    }
}

impl fmt::Display for EngineMultiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EngineMultiplier::PaperCompatible => "paper-compatible",
            EngineMultiplier::PerEngine => "per-engine",
        })
    }
}

/// Run-wide settings for [`flight_emissions`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EmissionOptions {
    pub factors: Co2eFactors,
    pub engine_multiplier: EngineMultiplier,
    pub interpolation_key: InterpolationKey,
}

/// Emissions of one computed flight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmissionsResult {
    pub lto: GasVector,
    pub ccd: GasVector,
    /// Share of `lto` emitted at the origin airport.
    pub lto_origin: GasVector,
    /// Share of `lto` emitted at the destination airport.
    pub lto_destination: GasVector,
    pub lto_co2e_kg: f64,
    pub ccd_co2e_kg: f64,
    pub total_co2e_kg: f64,
    pub per_seat_co2e_kg: f64,
    pub per_seat_mile_co2_kg: f64,
    pub times: LtoTimes,
    pub ccd_range: RangeFlag,
}

impl EmissionsResult {
    /// LTO plus CCD mass per gas.
    pub fn total(&self) -> GasVector {
        self.lto + self.ccd
    }
}

/// LTO and CCD emissions, CO₂e and intensities for one resolved flight.
///
/// Taxi times from the flight record feed the idle mode when both are
/// present. Family-fallback flights have both cycles scaled by the
/// efficiency factor. A flight whose engine factors or CCD profile cannot
/// be found is reported as incomputable.
pub fn flight_emissions(
    rf: &ResolvedFlight,
    engines: &EngineDatabank,
    profiles: &CcdTable,
    options: &EmissionOptions,
) -> Result<EmissionsResult, IncomputableCause> {
    if let Some(cause) = rf.provenance.incomputable {
        return Err(cause);
    }
    let res = rf.resolution.as_ref().ok_or(IncomputableCause::UnknownTail)?;
    let flight = &rf.flight;
    let air_time = flight.air_time_min.ok_or(IncomputableCause::MissingAirTime)?;
    let engine = engines
        .get(&res.engine_uid)
        .ok_or(IncomputableCause::MissingEngineFactors)?;
    let profile = profiles
        .get(&res.emissions_type)
        .ok_or(IncomputableCause::MissingCcdProfile)?;

    let times = LtoTimes::from_taxi_minutes(flight.taxi_in_min, flight.taxi_out_min);
    let scale = options.engine_multiplier.value(res.engine_count) * res.efficiency_factor;
    let lto_parts = lto_breakdown(engine, &times, scale);
    let lto_origin = lto_parts.origin();
    let lto_destination = lto_parts.destination();
    let lto = lto_origin + lto_destination;

    let x = match options.interpolation_key {
        InterpolationKey::Time => air_time,
        InterpolationKey::Distance => flight.distance_mi * NM_PER_STATUTE_MILE,
    };
    let ccd_estimate = ccd_interpolate_by(profile, options.interpolation_key, x, res.efficiency_factor)
        .map_err(|_| IncomputableCause::MissingCcdProfile)?;
    let ccd = ccd_estimate.emissions;

    let lto_co2e_kg = co2e(&lto, &options.factors);
    let ccd_co2e_kg = co2e(&ccd, &options.factors);
    let total_co2e_kg = lto_co2e_kg + ccd_co2e_kg;
    let seats = f64::from(res.seat_count);
    Ok(EmissionsResult {
        lto,
        ccd,
        lto_origin,
        lto_destination,
        lto_co2e_kg,
        ccd_co2e_kg,
        total_co2e_kg,
        per_seat_co2e_kg: total_co2e_kg / seats,
        per_seat_mile_co2_kg: (lto.co2() + ccd.co2()) / (seats * flight.distance_mi),
        times,
        ccd_range: ccd_estimate.range,
    })
}
