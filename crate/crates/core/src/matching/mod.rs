//! Linking flights to airframes and engines.
//!
//! Each tail number is resolved once, when [`MatchTables`] is built:
//!
//! 1. tail → B-43 row, giving the raw type designator and seat count;
//! 2. designator → canonical type via [`NormalizationRuleSet`];
//! 3. canonical type without a CCD profile → [`FamilyFallbackTable`]
//!    surrogate and efficiency factor;
//! 4. tail → FAA registry designation (through the engine-code table when
//!    it holds a code) → ICAO UID by token Jaccard;
//! 5. no registry row or no match → the type's most popular engine, or
//!    the surrogate type's when the type itself has none.
//!
//! Flights then share their tail's resolution through [`resolve_flight`].

mod config_csv;
mod fallback;
mod jaccard;
mod normalize;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

pub use config_csv::ConfigTableError;
pub use fallback::{
    build_popular_engine_table, FamilyFallback, FamilyFallbackTable, FleetEntry, PopularEngineTable,
    MAX_EFFICIENCY_FACTOR,
};
pub use jaccard::{jaccard_similarity, match_engine, tokenize, EngineMatch, EngineMatcher, TokenSet, DEFAULT_THRESHOLD};
pub use normalize::{normalize_airframe_type, NormalizationRuleSet};

use crate::emissions::{CcdTable, EngineDatabank};
use crate::ingest::{AirframeRecord, EngineCodeRecord, FlightRecord, TailEngineRecord};

/// How a tail's engine was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EngineSource {
    Exact,
    Jaccard,
    PopularFallback,
}

impl EngineSource {
    pub fn flag(self) -> &'static str {
        match self {
            EngineSource::Exact => "ENGINE_EXACT",
            EngineSource::Jaccard => "ENGINE_JACCARD",
            EngineSource::PopularFallback => "ENGINE_POPULAR_FALLBACK",
        }
    }
}

/// Why a flight has no emissions estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IncomputableCause {
    MissingTail,
    MissingAirTime,
    /// Tail number absent from the B-43 inventory.
    UnknownTail,
    /// No CCD profile for the type and no family fallback.
    UnknownAirframe,
    /// No registry match and no popular engine for the type.
    NoEngine,
    MissingEngineFactors,
    MissingCcdProfile,
}

impl IncomputableCause {
    pub const ALL: [IncomputableCause; 7] = [
        IncomputableCause::MissingTail,
        IncomputableCause::MissingAirTime,
        IncomputableCause::UnknownTail,
        IncomputableCause::UnknownAirframe,
        IncomputableCause::NoEngine,
        IncomputableCause::MissingEngineFactors,
        IncomputableCause::MissingCcdProfile,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IncomputableCause::MissingTail => "MISSING_TAIL",
            IncomputableCause::MissingAirTime => "MISSING_AIR_TIME",
            IncomputableCause::UnknownTail => "UNKNOWN_TAIL",
            IncomputableCause::UnknownAirframe => "UNKNOWN_AIRFRAME",
            IncomputableCause::NoEngine => "NO_ENGINE",
            IncomputableCause::MissingEngineFactors => "MISSING_ENGINE_FACTORS",
            IncomputableCause::MissingCcdProfile => "MISSING_CCD_PROFILE",
        }
    }
}

impl fmt::Display for IncomputableCause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which path the cascade took for a flight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Provenance {
    pub engine: Option<EngineSource>,
    pub family_fallback: bool,
    pub incomputable: Option<IncomputableCause>,
}

impl Provenance {
    pub fn flags(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        out.extend(self.engine.map(EngineSource::flag));
        if self.family_fallback {
            out.push("FAMILY_FALLBACK");
        }
        if self.incomputable.is_some() {
            out.push("INCOMPUTABLE");
        }
        out
    }
}

/// Everything known about one tail number after matching.
#[derive(Debug, Clone, PartialEq)]
pub struct TailResolution {
    pub canonical_type: String,
    /// Type whose CCD profile is used; differs from `canonical_type` only
    /// under family fallback.
    pub emissions_type: String,
    pub seat_count: u32,
    pub engine_count: u8,
    pub engine_uid: String,
    pub engine_source: EngineSource,
    /// Jaccard score for matched engines.
    pub engine_score: Option<f64>,
    /// 1.0 unless family fallback applied.
    pub efficiency_factor: f64,
}

impl TailResolution {
    pub fn provenance(&self) -> Provenance {
        Provenance {
            engine: Some(self.engine_source),
            family_fallback: self.emissions_type != self.canonical_type,
            incomputable: None,
        }
    }
}

/// A flight joined to its airframe and engine.
///
/// `resolution` is present whenever the tail resolved, even if the flight
/// is still incomputable (for example, missing air time).
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedFlight {
    pub flight: FlightRecord,
    pub resolution: Option<TailResolution>,
    pub provenance: Provenance,
}

impl ResolvedFlight {
    pub fn is_computable(&self) -> bool {
        self.provenance.incomputable.is_none()
    }

    /// Marks the flight incomputable, keeping whatever was resolved.
    pub fn withhold(&mut self, cause: IncomputableCause) {
        self.provenance.incomputable = Some(cause);
    }
}

/// Borrowed inputs for [`MatchTables::build`].
#[derive(Debug, Clone, Copy)]
pub struct MatchInputs<'a> {
    pub airframes: &'a [AirframeRecord],
    pub registry: &'a [TailEngineRecord],
    pub engine_codes: &'a [EngineCodeRecord],
    pub databank: &'a EngineDatabank,
    pub ccd: &'a CcdTable,
    pub rules: &'a NormalizationRuleSet,
    pub family_fallback: &'a FamilyFallbackTable,
    pub popular_override: Option<&'a PopularEngineTable>,
    pub threshold: f64,
}

/// Per-tail resolutions, computed once and read concurrently afterwards.
#[derive(Debug, Clone, Default)]
pub struct MatchTables {
    tails: HashMap<String, Result<TailResolution, IncomputableCause>>,
    popular: PopularEngineTable,
    warnings: Vec<String>,
}

struct AirframePart<'a> {
    record: &'a AirframeRecord,
    canonical_type: String,
    emissions_type: Result<(String, f64), IncomputableCause>,
    engine: Option<EngineMatch>,
}

impl MatchTables {
    pub fn build(inputs: MatchInputs<'_>) -> MatchTables {
        let mut warnings = Vec::new();
        let dangling: Vec<&str> = inputs
            .rules
            .canonical_types()
            .iter()
            .map(String::as_str)
            .filter(|t| !inputs.ccd.contains(t) && !inputs.family_fallback.contains(t))
            .collect();
        if !dangling.is_empty() {
            warnings.push(format!(
                "normalization targets without CCD profile or family fallback: {}",
                dangling.join(", ")
            ));
        }
        for (missing, fb) in inputs.family_fallback.iter() {
            if !inputs.ccd.contains(&fb.surrogate_type) {
                warnings.push(format!(
                    "family fallback {missing} -> {} ignored: surrogate has no CCD profile",
                    fb.surrogate_type
                ));
            }
        }

        let codes: HashMap<&str, &str> = inputs
            .engine_codes
            .iter()
            .map(|c| (c.faa_code.as_str(), c.designation.as_str()))
            .collect();
        let registry: HashMap<&str, &str> = inputs
            .registry
            .iter()
            .map(|r| {
                let text = codes
                    .get(r.engine_designation.as_str())
                    .copied()
                    .unwrap_or(r.engine_designation.as_str());
                (r.tail_number.as_str(), text)
            })
            .collect();

        let matcher = EngineMatcher::new(inputs.databank);
        let mut match_cache: BTreeMap<&str, Option<EngineMatch>> = BTreeMap::new();

        let parts: Vec<AirframePart<'_>> = inputs
            .airframes
            .iter()
            .map(|record| {
                let canonical_type = normalize_airframe_type(&record.raw_type_designator, inputs.rules)
                    .unwrap_or_else(|| record.raw_type_designator.trim().to_uppercase());
                let emissions_type = if inputs.ccd.contains(&canonical_type) {
                    Ok((canonical_type.clone(), 1.0))
                } else {
                    match inputs.family_fallback.get(&canonical_type) {
                        Some(fb) if inputs.ccd.contains(&fb.surrogate_type) => {
                            Ok((fb.surrogate_type.clone(), fb.efficiency_factor))
                        }
                        _ => Err(IncomputableCause::UnknownAirframe),
                    }
                };
                let engine = registry.get(record.tail_number.as_str()).and_then(|text| {
                    match_cache
                        .entry(text)
                        .or_insert_with(|| matcher.best_match(text, inputs.threshold))
                        .clone()
                });
                AirframePart {
                    record,
                    canonical_type,
                    emissions_type,
                    engine,
                }
            })
            .collect();

        let mut popular = build_popular_engine_table(parts.iter().filter_map(|p| {
            p.engine.as_ref().map(|m| FleetEntry {
                canonical_type: &p.canonical_type,
                engine_uid: &m.engine_uid,
                source: if m.exact {
                    EngineSource::Exact
                } else {
                    EngineSource::Jaccard
                },
            })
        }));
        if let Some(overrides) = inputs.popular_override {
            popular.overlay(overrides);
        }

        let tails = parts
            .into_iter()
            .map(|p| {
                let resolution = p.emissions_type.and_then(|(emissions_type, efficiency_factor)| {
                    let (engine_uid, engine_source, engine_score) = match p.engine {
                        Some(m) => (
                            m.engine_uid,
                            if m.exact {
                                EngineSource::Exact
                            } else {
                                EngineSource::Jaccard
                            },
                            Some(m.score),
                        ),
                        None => match popular
                            .get(&p.canonical_type)
                            .or_else(|| popular.get(&emissions_type))
                        {
                            Some(uid) => (uid.to_string(), EngineSource::PopularFallback, None),
                            None => return Err(IncomputableCause::NoEngine),
                        },
                    };
                    Ok(TailResolution {
                        canonical_type: p.canonical_type,
                        emissions_type,
                        seat_count: p.record.seat_count,
                        engine_count: p.record.engine_count,
                        engine_uid,
                        engine_source,
                        engine_score,
                        efficiency_factor,
                    })
                });
                (p.record.tail_number.clone(), resolution)
            })
            .collect();

        MatchTables {
            tails,
            popular,
            warnings,
        }
    }

    pub fn tail(&self, tail_number: &str) -> Option<&Result<TailResolution, IncomputableCause>> {
        self.tails.get(tail_number)
    }

    pub fn popular_engines(&self) -> &PopularEngineTable {
        &self.popular
    }

    /// Configuration inconsistencies noticed while building.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn tail_count(&self) -> usize {
        self.tails.len()
    }
}

/// Joins one flight to its tail's resolution.
///
/// Failures are recorded in the provenance rather than returned: a blank
/// tail, an unknown tail, an unresolvable airframe or engine, or a missing
/// air time all yield an incomputable flight.
pub fn resolve_flight(flight: &FlightRecord, tables: &MatchTables) -> ResolvedFlight {
    let looked_up = match &flight.tail_number {
        None => Err(IncomputableCause::MissingTail),
        Some(tail) => match tables.tail(tail) {
            None => Err(IncomputableCause::UnknownTail),
            Some(r) => r.clone(),
        },
    };
    let (resolution, mut provenance) = match looked_up {
        Ok(r) => {
            let p = r.provenance();
            (Some(r), p)
        }
        Err(cause) => (
            None,
            Provenance {
                incomputable: Some(cause),
                ..Provenance::default()
            },
        ),
    };
    if provenance.incomputable.is_none() && flight.air_time_min.is_none() {
        provenance.incomputable = Some(IncomputableCause::MissingAirTime);
    }
    ResolvedFlight {
        flight: flight.clone(),
        resolution,
        provenance,
    }
}

#[cfg(test)]
mod tests;
