#![allow(dead_code)]

use std::path::{Path, PathBuf};

use aeroemit::config::RunConfig;
use aeroemit::emissions::{CcdProfile, EngineLtoFactors, Knot};
use aeroemit::matching::{FamilyFallbackTable, NormalizationRuleSet};
use aeroemit::pipeline::Dataset;
use aeroemit::synthetic::SyntheticCorpus;
use aeroemit::GasVector;

pub fn fixture_dir(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

/// The DL2441 fixture config with outputs redirected to `out`.
pub fn dl2441_config(out: &Path) -> RunConfig {
    let mut cfg = RunConfig::load(&fixture_dir("dl2441").join("config.toml")).unwrap();
    cfg.output_dir = out.to_path_buf();
    cfg
}

/// CFM56-7B27E mode rates, kg/s, in takeoff, climb-out, approach, idle order.
pub fn cfm56_7b27e() -> EngineLtoFactors {
    EngineLtoFactors::new(
        "CFM56-7B27E",
        [
            GasVector::new(0.00003879, 4.07295, 0.00040083, 0.03095442),
            GasVector::new(0.00002062, 3.24765, 0.00017527, 0.01844459),
            GasVector::new(0.00001715, 1.08045, 0.00096726, 0.00311787),
            GasVector::new(0.0001694, 0.3465, 0.0032329, 0.0004796),
        ],
    )
}

/// 737-900ER CCD rows: minutes, then HC, CO2, CO, NOx kg.
pub const B739ER_CCD: [(f64, [f64; 4]); 10] = [
    (22.0, [0.35, 3114.0, 2.93, 18.3]),
    (32.0, [0.51, 4626.0, 4.05, 27.47]),
    (39.0, [0.57, 5608.0, 4.36, 32.0]),
    (71.0, [0.84, 10147.0, 5.64, 52.69]),
    (105.0, [1.13, 14300.0, 7.12, 70.1]),
    (139.0, [1.44, 18294.0, 8.26, 86.64]),
    (206.0, [1.97, 26953.0, 10.42, 123.27]),
    (273.0, [2.5, 36023.0, 12.62, 162.82]),
    (340.0, [3.03, 44475.0, 14.73, 197.69]),
    (410.0, [3.55, 54250.0, 17.11, 240.25]),
];

pub fn b739er_profile() -> CcdProfile {
    let knots = B739ER_CCD
        .iter()
        .map(|&(t, [hc, co2, co, nox])| Knot::new(t, GasVector::new(hc, co2, co, nox)))
        .collect();
    CcdProfile::new("737-900ER", knots).unwrap()
}

pub fn dataset_from(corpus: &SyntheticCorpus) -> Dataset {
    Dataset {
        flights: corpus.flights.clone(),
        airframes: corpus.airframes.clone(),
        registry: corpus.registry.clone(),
        engine_codes: corpus.engine_codes.clone(),
        databank: corpus.engines.iter().cloned().collect(),
        ccd: corpus.profiles.iter().cloned().collect(),
        rules: NormalizationRuleSet::builtin(),
        family_fallback: FamilyFallbackTable::builtin(),
        popular_override: None,
        reports: Vec::new(),
    }
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}
