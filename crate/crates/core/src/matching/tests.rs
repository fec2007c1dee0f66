use chrono::NaiveDate;

use super::*;
use crate::emissions::{CcdProfile, EngineLtoFactors, Knot};
use crate::gas::GasVector;

fn engine(uid: &str) -> EngineLtoFactors {
    EngineLtoFactors::new(uid, [GasVector::new(0.0, 1.0, 0.0, 0.0); 4])
}

fn profile(ty: &str) -> CcdProfile {
    CcdProfile::new(
        ty,
        vec![
            Knot::new(20.0, GasVector::new(0.1, 3000.0, 1.0, 10.0)),
            Knot::new(200.0, GasVector::new(1.0, 30000.0, 10.0, 100.0)),
        ],
    )
    .unwrap()
}

fn airframe(tail: &str, raw: &str, seats: u32) -> AirframeRecord {
    AirframeRecord {
        tail_number: tail.into(),
        raw_type_designator: raw.into(),
        seat_count: seats,
        engine_count: 2,
    }
}

fn registry(tail: &str, designation: &str) -> TailEngineRecord {
    TailEngineRecord {
        tail_number: tail.into(),
        engine_designation: designation.into(),
    }
}

fn flight(tail: Option<&str>, air_time: Option<f64>) -> FlightRecord {
    FlightRecord {
        flight_date: NaiveDate::from_ymd_opt(2021, 9, 1).unwrap(),
        carrier: "DL".into(),
        flight_number: "2441".into(),
        tail_number: tail.map(str::to_string),
        origin: "PHL".into(),
        destination: "ATL".into(),
        air_time_min: air_time,
        taxi_in_min: Some(7.43),
        taxi_out_min: Some(15.42),
        distance_mi: 666.0,
    }
}

struct World {
    airframes: Vec<AirframeRecord>,
    registry: Vec<TailEngineRecord>,
    codes: Vec<EngineCodeRecord>,
    databank: EngineDatabank,
    ccd: CcdTable,
    rules: NormalizationRuleSet,
    fallback: FamilyFallbackTable,
}

impl World {
    fn new() -> Self {
        World {
            airframes: vec![
                airframe("N815DN", "B737-900ER", 180),
                airframe("N8701Q", "737-8", 172),
                airframe("N801NN", "737-823", 160),
                airframe("N802NN", "737/800", 160),
                airframe("N803NN", "B737-800", 160),
                airframe("N804NN", "737-8NG", 160),
                airframe("N901XX", "ZEPPELIN NT", 12),
            ],
            registry: vec![
                registry("N815DN", "CFM56-7B27E"),
                registry("N801NN", "CFM56 7B27"),
                registry("N802NN", "CFM56-7B27"),
                registry("N803NN", "CFM56-7B26"),
                registry("N8701Q", "LEAP-1B28"),
            ],
            codes: Vec::new(),
            databank: ["CFM56-7B27E", "CFM56-7B27", "CFM56-7B26", "V2527-A5"]
                .into_iter()
                .map(engine)
                .collect(),
            ccd: ["737-900ER", "737-800"].into_iter().map(profile).collect(),
            rules: NormalizationRuleSet::builtin(),
            fallback: FamilyFallbackTable::builtin(),
        }
    }

    fn tables(&self) -> MatchTables {
        MatchTables::build(MatchInputs {
            airframes: &self.airframes,
            registry: &self.registry,
            engine_codes: &self.codes,
            databank: &self.databank,
            ccd: &self.ccd,
            rules: &self.rules,
            family_fallback: &self.fallback,
            popular_override: None,
            threshold: DEFAULT_THRESHOLD,
        })
    }
}

#[test]
fn worked_example_tail_resolves_exactly() {
    let tables = World::new().tables();
    let rf = resolve_flight(&flight(Some("N815DN"), Some(124.0)), &tables);
    let res = rf.resolution.as_ref().unwrap();
    assert_eq!(res.canonical_type, "737-900ER");
    assert_eq!(res.emissions_type, "737-900ER");
    assert_eq!(res.seat_count, 180);
    assert_eq!(res.engine_uid, "CFM56-7B27E");
    assert_eq!(res.efficiency_factor, 1.0);
    assert_eq!(rf.provenance.flags(), vec!["ENGINE_EXACT"]);
    assert!(rf.is_computable());
}

#[test]
fn blank_tail_is_incomputable() {
    let tables = World::new().tables();
    let rf = resolve_flight(&flight(None, Some(124.0)), &tables);
    assert_eq!(rf.provenance.incomputable, Some(IncomputableCause::MissingTail));
    assert_eq!(rf.provenance.flags(), vec!["INCOMPUTABLE"]);
    assert!(rf.resolution.is_none());
}

#[test]
fn missing_air_time_keeps_resolution() {
    let tables = World::new().tables();
    let rf = resolve_flight(&flight(Some("N815DN"), None), &tables);
    assert_eq!(rf.provenance.incomputable, Some(IncomputableCause::MissingAirTime));
    assert_eq!(rf.provenance.flags(), vec!["ENGINE_EXACT", "INCOMPUTABLE"]);
    assert!(rf.resolution.is_some());
}

#[test]
fn unknown_tail_and_unknown_airframe() {
    let tables = World::new().tables();
    let rf = resolve_flight(&flight(Some("N000ZZ"), Some(60.0)), &tables);
    assert_eq!(rf.provenance.incomputable, Some(IncomputableCause::UnknownTail));
    let rf = resolve_flight(&flight(Some("N901XX"), Some(60.0)), &tables);
    assert_eq!(rf.provenance.incomputable, Some(IncomputableCause::UnknownAirframe));
}

#[test]
fn family_fallback_sets_surrogate_and_factor() {
    let tables = World::new().tables();
    let rf = resolve_flight(&flight(Some("N8701Q"), Some(124.0)), &tables);
    let res = rf.resolution.as_ref().unwrap();
    assert_eq!(res.canonical_type, "737-8");
    assert_eq!(res.emissions_type, "737-800");
    assert_eq!(res.efficiency_factor, 0.85);
    // LEAP-1B28 shares no token with the databank and no 737-8 engine was
    // matched, so the surrogate's popular engine is used
    assert_eq!(res.engine_uid, "CFM56-7B27");
    assert_eq!(
        rf.provenance.flags(),
        vec!["ENGINE_POPULAR_FALLBACK", "FAMILY_FALLBACK"]
    );
}

#[test]
fn popular_engine_fills_missing_registry_rows() {
    let tables = World::new().tables();
    // three 737-800 tails matched: 7B27 (exact), 7B27 (Jaccard), 7B26 (exact)
    assert_eq!(tables.popular_engines().get("737-800"), Some("CFM56-7B27"));
    let rf = resolve_flight(&flight(Some("N804NN"), Some(90.0)), &tables);
    let res = rf.resolution.as_ref().unwrap();
    assert_eq!(res.engine_uid, "CFM56-7B27");
    assert_eq!(res.engine_source, EngineSource::PopularFallback);
    assert_eq!(rf.provenance.flags(), vec!["ENGINE_POPULAR_FALLBACK"]);
}

#[test]
fn jaccard_match_is_flagged() {
    let tables = World::new().tables();
    let res = tables.tail("N801NN").unwrap().as_ref().unwrap();
    assert_eq!(res.engine_uid, "CFM56-7B27");
    assert_eq!(res.engine_source, EngineSource::Jaccard);
    assert_eq!(res.engine_score, Some(1.0));
}

#[test]
fn engine_code_table_translates_registry_codes() {
    let mut w = World::new();
    w.registry = vec![registry("N815DN", "52035")];
    w.codes = vec![EngineCodeRecord {
        faa_code: "52035".into(),
        designation: "CFM INTL CFM56-7B27E".into(),
    }];
    let tables = w.tables();
    let res = tables.tail("N815DN").unwrap().as_ref().unwrap();
    assert_eq!(res.engine_uid, "CFM56-7B27E");
    assert_eq!(res.engine_source, EngineSource::Jaccard);
}

#[test]
fn no_engine_without_registry_or_fleet() {
    let mut w = World::new();
    w.registry.clear();
    let tables = w.tables();
    assert_eq!(tables.tail("N815DN"), Some(&Err(IncomputableCause::NoEngine)));
}

#[test]
fn popular_override_wins() {
    let w = World::new();
    let overrides: PopularEngineTable = [("737-800".to_string(), "CFM56-7B26".to_string())]
        .into_iter()
        .collect();
    let tables = MatchTables::build(MatchInputs {
        airframes: &w.airframes,
        registry: &w.registry,
        engine_codes: &w.codes,
        databank: &w.databank,
        ccd: &w.ccd,
        rules: &w.rules,
        family_fallback: &w.fallback,
        popular_override: Some(&overrides),
        threshold: DEFAULT_THRESHOLD,
    });
    assert_eq!(
        tables.tail("N804NN").unwrap().as_ref().unwrap().engine_uid,
        "CFM56-7B26"
    );
}

#[test]
fn warnings_name_dangling_targets() {
    let tables = World::new().tables();
    assert!(tables.warnings().iter().any(|w| w.contains("A350-900")));
    assert!(!tables.warnings().iter().any(|w| w.contains(" 737-800,")));
}

#[test]
fn resolution_is_order_independent() {
    let w = World::new();
    let a = w.tables();
    let mut shuffled = World::new();
    shuffled.airframes.reverse();
    shuffled.registry.reverse();
    let b = shuffled.tables();
    for af in &w.airframes {
        assert_eq!(a.tail(&af.tail_number), b.tail(&af.tail_number));
    }
    assert_eq!(
        a.popular_engines().iter().collect::<Vec<_>>(),
        b.popular_engines().iter().collect::<Vec<_>>()
    );
}

/// Hand-built designator fixture: raw spelling and the canonical type it
/// should collapse to under the built-in rules.
const DESIGNATORS: [(&str, &str); 30] = [
    ("B737-800", "737-800"),
    ("737/800", "737-800"),
    ("737-8NG", "737-800"),
    ("737-824", "737-800"),
    ("B738", "737-800"),
    ("B739ER", "737-900ER"),
    ("737-932ER", "737-900ER"),
    ("B737-900ER", "737-900ER"),
    ("737-924", "737-900"),
    ("B737-700", "737-700"),
    ("737-7H4", "737-700"),
    ("737 MAX 8", "737-8"),
    ("B38M", "737-8"),
    ("737-9 MAX", "737-9"),
    ("A320-214", "A320-200"),
    ("A320", "A320-200"),
    ("A320NEO", "A320NEO"),
    ("A320-251N", "A320NEO"),
    ("A321-231", "A321-200"),
    ("A321-271N", "A321NEO"),
    ("A319-112", "A319-100"),
    ("BCS3", "A220"),
    ("A330-941", "A330-900"),
    ("A330-323", "A330-300"),
    ("757-232", "757-200"),
    ("767-332ER", "767-300"),
    ("ERJ-175LR", "E175"),
    ("ERJ 170-200 LR", "E175"),
    ("CL-600-2D24", "CRJ-900"),
    ("MD-88", "MD-88"),
];

#[test]
fn builtin_rules_on_designator_fixture() {
    let rules = NormalizationRuleSet::builtin();
    for (raw, want) in DESIGNATORS {
        let got = normalize_airframe_type(raw, &rules);
        assert_eq!(got.as_deref(), Some(want), "{raw}");
        assert_eq!(normalize_airframe_type(want, &rules).as_deref(), Some(want));
    }
}
