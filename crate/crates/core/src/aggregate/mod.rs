//! System-wide roll-ups of per-flight results: by carrier, airport, route,
//! airframe and engine, per-gas CO₂e breakdowns, and scatter datasets.
//!
//! All totals are accumulated with [`FixedSum`], so they are identical for
//! any ordering of the input and partition exactly: the airline totals, the
//! airport LTO totals plus the CCD total, and the sum over flights agree to
//! the last unit.

mod fixed;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use fixed::{FixedSum, GasSum};

use crate::emissions::{co2e, Co2eFactors, EmissionsResult, LtoBreakdown};
use crate::gas::{Gas, GasVector};
use crate::matching::ResolvedFlight;

/// One flight after resolution and, when computable, emissions.
#[derive(Debug, Clone, PartialEq)]
pub struct FlightResult {
    pub resolved: ResolvedFlight,
    pub emissions: Option<EmissionsResult>,
}

impl FlightResult {
    /// The flight's exact contributions: origin LTO, destination LTO, CCD.
    pub fn mass_contributions(&self) -> Option<(GasSum, GasSum, GasSum)> {
        self.emissions
            .as_ref()
            .map(|e| (GasSum::from(e.lto_origin), GasSum::from(e.lto_destination), GasSum::from(e.ccd)))
    }

    /// Exact LTO + CCD mass of the flight.
    pub fn mass_total(&self) -> Option<GasSum> {
        self.mass_contributions().map(|(o, d, c)| o + d + c)
    }

    fn seat_miles(&self) -> Option<FixedSum> {
        let res = self.resolved.resolution.as_ref()?;
        self.emissions?;
        Some(FixedSum::from_f64(
            f64::from(res.seat_count) * self.resolved.flight.distance_mi,
        ))
    }
}

/// Origin and destination shares of an LTO cycle.
///
/// The origin takes take-off, climb-out and the taxi-out part of idle; the
/// destination takes approach and the taxi-in part. Their sum is the LTO
/// vector by definition.
pub fn split_lto(parts: &LtoBreakdown) -> (GasVector, GasVector) {
    (parts.origin(), parts.destination())
}

/// Totals for one group of flights (a carrier, route, airframe type, or
/// engine).
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSummary {
    pub key: String,
    pub total_flights: usize,
    /// Flights with computed emissions.
    pub emission_flights: usize,
    /// Seats over emission flights.
    pub total_seats: u64,
    pub lto: GasSum,
    pub ccd: GasSum,
    /// Σ seats × statute miles over emission flights.
    pub seat_miles: FixedSum,
    pub total_co2_kg: f64,
    pub total_co2e_kg: f64,
    /// Absent when the group has no emission flights.
    pub co2_per_seat_mile: Option<f64>,
    pub co2e_per_seat_mile: Option<f64>,
}

/// Per-carrier summary, the shape of an airline statistics table.
pub type AirlineSummary = GroupSummary;

impl GroupSummary {
    /// LTO + CCD mass per gas.
    pub fn gases(&self) -> GasSum {
        self.lto + self.ccd
    }
}

#[derive(Default)]
struct GroupAcc {
    total_flights: usize,
    emission_flights: usize,
    total_seats: u64,
    lto: GasSum,
    ccd: GasSum,
    seat_miles: FixedSum,
}

impl GroupAcc {
    fn push(&mut self, r: &FlightResult) {
        self.total_flights += 1;
        if let (Some((o, d, c)), Some(sm), Some(res)) =
            (r.mass_contributions(), r.seat_miles(), r.resolved.resolution.as_ref())
        {
            self.emission_flights += 1;
            self.total_seats += u64::from(res.seat_count);
            self.lto += o + d;
            self.ccd += c;
            self.seat_miles += sm;
        }
    }

    fn finish(self, key: String, factors: &Co2eFactors) -> GroupSummary {
        let gases = (self.lto + self.ccd).to_vector();
        let total_co2_kg = gases.co2();
        let total_co2e_kg = co2e(&gases, factors);
        let denom = self.seat_miles.to_f64();
        let per = |v: f64| (self.emission_flights > 0 && denom > 0.0).then(|| v / denom);
        GroupSummary {
            key,
            total_flights: self.total_flights,
            emission_flights: self.emission_flights,
            total_seats: self.total_seats,
            lto: self.lto,
            ccd: self.ccd,
            seat_miles: self.seat_miles,
            total_co2_kg,
            total_co2e_kg,
            co2_per_seat_mile: per(total_co2_kg),
            co2e_per_seat_mile: per(total_co2e_kg),
        }
    }
}

/// Groups flights by `key` (flights mapping to `None` are skipped) and
/// orders the groups by flight count, descending, then key.
pub fn aggregate_by(
    results: &[FlightResult],
    factors: &Co2eFactors,
    key: impl Fn(&FlightResult) -> Option<String>,
) -> Vec<GroupSummary> {
    let mut groups: BTreeMap<String, GroupAcc> = BTreeMap::new();
    for r in results {
        if let Some(k) = key(r) {
            groups.entry(k).or_default().push(r);
        }
    }
    let mut out: Vec<GroupSummary> = groups
        .into_iter()
        .map(|(k, acc)| acc.finish(k, factors))
        .collect();
    out.sort_by(|a, b| b.total_flights.cmp(&a.total_flights).then_with(|| a.key.cmp(&b.key)));
    out
}

/// One summary per operating carrier.
pub fn aggregate_airlines(results: &[FlightResult], factors: &Co2eFactors) -> Vec<AirlineSummary> {
    aggregate_by(results, factors, |r| Some(r.resolved.flight.carrier.clone()))
}

/// One summary per directional origin-destination pair, keyed `ORG-DST`.
pub fn aggregate_routes(results: &[FlightResult], factors: &Co2eFactors) -> Vec<GroupSummary> {
    aggregate_by(results, factors, |r| {
        let f = &r.resolved.flight;
        Some(format!("{}-{}", f.origin, f.destination))
    })
}

/// One summary per canonical airframe type, over flights whose tail resolved.
pub fn aggregate_airframes(results: &[FlightResult], factors: &Co2eFactors) -> Vec<GroupSummary> {
    aggregate_by(results, factors, |r| {
        r.resolved.resolution.as_ref().map(|res| res.canonical_type.clone())
    })
}

/// One summary per engine UID, over flights whose tail resolved.
pub fn aggregate_engines(results: &[FlightResult], factors: &Co2eFactors) -> Vec<GroupSummary> {
    aggregate_by(results, factors, |r| {
        r.resolved.resolution.as_ref().map(|res| res.engine_uid.clone())
    })
}

/// Local LTO emissions at one airport.
#[derive(Debug, Clone, PartialEq)]
pub struct AirportLtoSummary {
    pub airport: String,
    pub lto: GasSum,
    pub lto_co2e_kg: f64,
}

/// LTO mass attributed to each airport through the origin/destination
/// split, ordered by CO₂e descending, then airport code.
pub fn aggregate_airports(results: &[FlightResult], factors: &Co2eFactors) -> Vec<AirportLtoSummary> {
    let mut airports: BTreeMap<&str, GasSum> = BTreeMap::new();
    for r in results {
        if let Some((origin, destination, _)) = r.mass_contributions() {
            let f = &r.resolved.flight;
            *airports.entry(&f.origin).or_default() += origin;
            *airports.entry(&f.destination).or_default() += destination;
        }
    }
    let mut out: Vec<AirportLtoSummary> = airports
        .into_iter()
        .map(|(airport, lto)| AirportLtoSummary {
            airport: airport.to_string(),
            lto_co2e_kg: co2e(&lto.to_vector(), factors),
            lto,
        })
        .collect();
    out.sort_by(|a, b| {
        b.lto_co2e_kg
            .total_cmp(&a.lto_co2e_kg)
            .then_with(|| a.airport.cmp(&b.airport))
    });
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cycle {
    Lto,
    Ccd,
}

impl Cycle {
    pub fn as_str(self) -> &'static str {
        match self {
            Cycle::Lto => "LTO",
            Cycle::Ccd => "CCD",
        }
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// System-wide mass per gas for one cycle, raw and as CO₂e.
#[derive(Debug, Clone, PartialEq)]
pub struct GasBreakdown {
    pub cycle: Cycle,
    pub totals: GasSum,
    pub raw_kg: GasVector,
    /// `raw_kg` times each gas's factor.
    pub co2e_kg: GasVector,
}

impl GasBreakdown {
    fn new(cycle: Cycle, totals: GasSum, factors: &Co2eFactors) -> Self {
        let raw_kg = totals.to_vector();
        GasBreakdown {
            cycle,
            totals,
            raw_kg,
            co2e_kg: factors.weigh(&raw_kg),
        }
    }

    /// Fraction of the cycle's CO₂e contributed by `gas`.
    pub fn co2e_share(&self, gas: Gas) -> Option<f64> {
        let total: f64 = self.co2e_kg.as_array().iter().sum();
        (total > 0.0).then(|| self.co2e_kg[gas] / total)
    }
}

/// LTO and CCD per-gas breakdowns over all computed flights.
pub fn gas_breakdowns(results: &[FlightResult], factors: &Co2eFactors) -> (GasBreakdown, GasBreakdown) {
    let mut lto = GasSum::ZERO;
    let mut ccd = GasSum::ZERO;
    for (o, d, c) in results.iter().filter_map(FlightResult::mass_contributions) {
        lto += o + d;
        ccd += c;
    }
    (
        GasBreakdown::new(Cycle::Lto, lto, factors),
        GasBreakdown::new(Cycle::Ccd, ccd, factors),
    )
}

/// Step-function CO₂-per-seat-mile baseline for short and long haul.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnepBaseline {
    pub short_haul_co2_per_seat_mile: f64,
    pub long_haul_co2_per_seat_mile: f64,
    pub cutoff_mi: f64,
}

/// The short-haul constant below the cutoff, the long-haul constant at or
/// above it.
pub fn unep_baseline(distance_mi: f64, config: &UnepBaseline) -> f64 {
    if distance_mi < config.cutoff_mi {
        config.short_haul_co2_per_seat_mile
    } else {
        config.long_haul_co2_per_seat_mile
    }
}

/// One computed flight on a distance scatter plot.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterPoint {
    pub distance_mi: f64,
    /// Total CO₂e (kg) or CO₂ per seat-mile, depending on the dataset.
    pub value: f64,
    /// Baseline at this distance, seat-mile dataset only, when configured.
    pub baseline: Option<f64>,
    pub canonical_type: String,
    pub engine_uid: String,
    pub carrier: String,
}

/// `(co2e vs distance, co2 per seat-mile vs distance)`, one point per
/// computed flight in input order.
pub fn scatter_datasets(
    results: &[FlightResult],
    baseline: Option<&UnepBaseline>,
) -> (Vec<ScatterPoint>, Vec<ScatterPoint>) {
    let mut co2e_points = Vec::new();
    let mut seat_mile_points = Vec::new();
    for r in results {
        let (Some(e), Some(res)) = (r.emissions.as_ref(), r.resolved.resolution.as_ref()) else {
            continue;
        };
        let f = &r.resolved.flight;
        let point = ScatterPoint {
            distance_mi: f.distance_mi,
            value: e.total_co2e_kg,
            baseline: None,
            canonical_type: res.canonical_type.clone(),
            engine_uid: res.engine_uid.clone(),
            carrier: f.carrier.clone(),
        };
        seat_mile_points.push(ScatterPoint {
            value: e.per_seat_mile_co2_kg,
            baseline: baseline.map(|b| unep_baseline(f.distance_mi, b)),
            ..point.clone()
        });
        co2e_points.push(point);
    }
    (co2e_points, seat_mile_points)
}
