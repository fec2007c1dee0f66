mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use aeroemit::aggregate::UnepBaseline;
use aeroemit::config::RunConfig;
use aeroemit::emissions::{Co2eFactors, InterpolationKey, Mode};
use aeroemit::matching::IncomputableCause;
use aeroemit::pipeline::{self, PipelineError, *};
use aeroemit::synthetic::{SyntheticCorpus, SyntheticSpec};
use aeroemit::Gas;
use tempfile::TempDir;

use common::*;

const ONTIME_HEADER: &str =
    "flight_date,carrier,flight_number,tail_number,origin,dest,air_time_min,taxi_in_min,taxi_out_min,distance_mi\n";

/// Copy of the DL2441 fixture with `ontime_rows` as the flight table.
fn workspace(ontime_rows: &str) -> (TempDir, RunConfig) {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(fixture_dir("dl2441")).unwrap() {
        let path = entry.unwrap().path();
        fs::copy(&path, dir.path().join(path.file_name().unwrap())).unwrap();
    }
    fs::write(dir.path().join("ontime.csv"), format!("{ONTIME_HEADER}{ontime_rows}")).unwrap();
    let cfg = RunConfig::load(&dir.path().join("config.toml")).unwrap();
    (dir, cfg)
}

fn read_table(path: &Path) -> Vec<BTreeMap<String, String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    r.records()
        .map(|rec| header.iter().cloned().zip(rec.unwrap().iter().map(String::from)).collect())
        .collect()
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    OUTPUT_FILES
        .iter()
        .map(|f| (f.to_string(), fs::read(dir.join(f)).unwrap()))
        .collect()
}

#[test]
fn golden_flight_row() {
    let out = tempfile::tempdir().unwrap();
    let cfg = dl2441_config(out.path());
    let summary = pipeline::run(&cfg, None).unwrap();
    assert_eq!(summary.coverage.computed_flights, 1);
    let rows = read_table(&out.path().join(FLIGHT_EMISSIONS_CSV));
    assert_eq!(rows.len(), 1);
    let row = &rows[0];
    assert_eq!(row["carrier"], "DL");
    assert_eq!(row["engine_uid"], "CFM56-7B27E");
    assert_eq!(row["canonical_type"], "737-900ER");
    assert_eq!(row["flags"], "ENGINE_EXACT");
    let total: f64 = row["total_co2e_kg"].parse().unwrap();
    assert!(rel_err(total, 43265.46) < 0.01, "{total}");
    let per_seat: f64 = row["per_seat_co2e_kg"].parse().unwrap();
    assert!(rel_err(per_seat, 240.36) < 0.01, "{per_seat}");
}

#[test]
fn golden_lto_matches_hand_computation() {
    let out = tempfile::tempdir().unwrap();
    let cfg = dl2441_config(out.path());
    pipeline::run(&cfg, Some(1)).unwrap();
    let row = &read_table(&out.path().join(FLIGHT_EMISSIONS_CSV))[0];
    let e = cfm56_7b27e();
    for gas in Gas::ALL {
        let want = e.rate(gas, Mode::Takeoff) * 42.0
            + e.rate(gas, Mode::Climbout) * 132.0
            + e.rate(gas, Mode::Approach) * 240.0
            + e.rate(gas, Mode::Idle) * 22.85 * 60.0;
        let got: f64 = row[&format!("lto_{}_kg", gas.column())].parse().unwrap();
        assert!((got - want).abs() <= 0.005, "{gas}: {got} vs {want}");
    }
}

#[test]
fn rerun_is_byte_identical() {
    let out = tempfile::tempdir().unwrap();
    let cfg = dl2441_config(out.path());
    pipeline::run(&cfg, Some(2)).unwrap();
    let first = snapshot(out.path());
    pipeline::run(&cfg, Some(3)).unwrap();
    assert_eq!(snapshot(out.path()), first);
}

#[test]
fn run_leaves_no_scratch_directories() {
    let out = tempfile::tempdir().unwrap();
    pipeline::run(&dl2441_config(out.path()), None).unwrap();
    let mut names: Vec<String> = fs::read_dir(out.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    let mut want: Vec<String> = OUTPUT_FILES.iter().map(|s| s.to_string()).collect();
    want.sort();
    assert_eq!(names, want);
}

#[test]
fn unwritable_output_leaves_nothing_behind() {
    let (dir, mut cfg) = workspace("2021-09-01,DL,2441,N815DN,PHL,ATL,124,7.43,15.42,666\n");
    let blocker = dir.path().join("blocked");
    fs::write(&blocker, "not a directory").unwrap();
    cfg.output_dir = blocker.join("out");
    let err = pipeline::run(&cfg, None).unwrap_err();
    assert!(matches!(err, PipelineError::Output { .. }), "{err}");
    assert_eq!(fs::read_to_string(&blocker).unwrap(), "not a directory");
}

#[test]
fn empty_flight_table() {
    let (dir, cfg) = workspace("");
    let summary = pipeline::run(&cfg, None).unwrap();
    assert_eq!(summary.coverage.total_flights, 0);
    assert_eq!(summary.coverage.coverage(), None);
    let out = dir.path().join("out");
    assert!(read_table(&out.join(FLIGHT_EMISSIONS_CSV)).is_empty());
    assert!(read_table(&out.join(AIRLINE_SUMMARY_CSV)).is_empty());
    let coverage: BTreeMap<String, String> = read_table(&out.join(COVERAGE_REPORT_CSV))
        .into_iter()
        .map(|r| (r["metric"].clone(), r["value"].clone()))
        .collect();
    assert_eq!(coverage["total_flights"], "0");
    assert_eq!(pipeline::report(&out, 5).unwrap(), "no computed flights\n");
}

fn ten_flights(blank_tail_at: Option<usize>) -> String {
    (0..10)
        .map(|i| {
            let tail = if Some(i) == blank_tail_at { "" } else { "N815DN" };
            format!("2021-09-0{},DL,{},{tail},PHL,ATL,{},7,15,666\n", i % 9 + 1, 2400 + i, 100 + 5 * i)
        })
        .collect()
}

#[test]
fn validate_complete_fixture() {
    let (_dir, cfg) = workspace(&ten_flights(None));
    let v = pipeline::validate(&cfg).unwrap();
    assert_eq!(v.coverage.coverage(), Some(1.0));
    assert_eq!(v.coverage.engine_exact, 10);
}

#[test]
fn validate_counts_missing_tail() {
    let (dir, cfg) = workspace(&ten_flights(Some(4)));
    let v = pipeline::validate(&cfg).unwrap();
    assert_eq!(v.coverage.coverage(), Some(0.9));
    assert_eq!(v.coverage.causes[&IncomputableCause::MissingTail], 1);
    assert_eq!(v.coverage.incomputable(), 1);
    assert!(!dir.path().join("out").exists(), "validate must not write outputs");
}

#[test]
fn synthetic_corpus_validates_complete() {
    let dir = tempfile::tempdir().unwrap();
    let spec = SyntheticSpec {
        flights: 400,
        tails: 60,
        ..SyntheticSpec::default()
    };
    let cfg = RunConfig::load(&SyntheticCorpus::generate(&spec).write_with_config(dir.path()).unwrap()).unwrap();
    assert_eq!(pipeline::validate(&cfg).unwrap().coverage.coverage(), Some(1.0));
}

#[test]
fn missing_input_is_an_input_error() {
    let (dir, cfg) = workspace("");
    fs::remove_file(dir.path().join("b43.csv")).unwrap();
    let err = pipeline::validate(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().contains("b43.csv"), "{err}");
    let err = RunConfig::load(&dir.path().join("config.toml")).unwrap_err();
    assert!(err.to_string().contains("b43.csv"), "{err}");
}

#[test]
fn ingest_errors_name_table_and_line() {
    let (dir, cfg) = workspace("");
    fs::write(
        dir.path().join("tail_registry.csv"),
        "tail_number,engine_designation\nN815DN,CFM56-7B27E\nN815DN,CFM56-7B26\n",
    )
    .unwrap();
    let err = pipeline::validate(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    let msg = err.to_string();
    assert!(msg.contains("tail_registry") && msg.contains("line 3"), "{msg}");
}

/// Per-airport LTO CO2e of the DL2441 engine, from the reference rates.
fn airport_oracle(flights: &[(&str, &str, f64, f64)]) -> BTreeMap<String, f64> {
    let e = cfm56_7b27e();
    let f = Co2eFactors::default();
    let weighted = |mode| Gas::ALL.iter().map(|&g| e.rate(g, mode) * f.factor(g)).sum::<f64>();
    let mut out = BTreeMap::new();
    for &(origin, dest, taxi_in, taxi_out) in flights {
        *out.entry(origin.to_string()).or_insert(0.0) += weighted(Mode::Takeoff) * 42.0
            + weighted(Mode::Climbout) * 132.0
            + weighted(Mode::Idle) * taxi_out * 60.0;
        *out.entry(dest.to_string()).or_insert(0.0) +=
            weighted(Mode::Approach) * 240.0 + weighted(Mode::Idle) * taxi_in * 60.0;
    }
    out
}

fn report_airports(text: &str) -> Vec<String> {
    text.split("top airports by LTO CO2e")
        .nth(1)
        .unwrap()
        .lines()
        .skip(2)
        .take_while(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().nth(1).unwrap().to_string())
        .collect()
}

#[test]
fn report_ranks_airports_by_lto_co2e() {
    let flights = [("ATL", "DFW", 10.0, 20.0), ("DFW", "DEN", 5.0, 10.0), ("DEN", "ATL", 30.0, 5.0)];
    let rows: String = flights
        .iter()
        .enumerate()
        .map(|(i, (o, d, tin, tout))| format!("2021-09-01,DL,{i},N815DN,{o},{d},90,{tin},{tout},700\n"))
        .collect();
    let (dir, cfg) = workspace(&rows);
    pipeline::run(&cfg, None).unwrap();
    let out = dir.path().join("out");

    let oracle = airport_oracle(&flights);
    let mut expected: Vec<(&String, &f64)> = oracle.iter().collect();
    expected.sort_by(|a, b| b.1.total_cmp(a.1));
    let expected: Vec<String> = expected.into_iter().map(|(k, _)| k.clone()).collect();
    assert_eq!(report_airports(&pipeline::report(&out, 5).unwrap()), expected);

    for row in read_table(&out.join(AIRPORT_LTO_CSV)) {
        let got: f64 = row["lto_co2e_kg"].parse().unwrap();
        assert!((got - oracle[&row["airport"]]).abs() <= 0.006, "{row:?}");
    }
}

#[test]
fn single_flight_report() {
    let (dir, cfg) = workspace("2021-09-01,DL,2441,N815DN,PHL,ATL,124,7.43,15.42,666\n");
    pipeline::run(&cfg, None).unwrap();
    let text = pipeline::report(&dir.path().join("out"), 5).unwrap();
    assert!(text.contains("coverage: 1 of 1 flights computed"), "{text}");
    let airlines = text.split("top airlines by CO2e").nth(1).unwrap();
    let airline_rows: Vec<&str> = airlines.lines().skip(2).take_while(|l| !l.trim().is_empty()).collect();
    assert_eq!(airline_rows.len(), 1);
    assert!(airline_rows[0].contains("DL"));
    let mut airports = report_airports(&text);
    airports.sort();
    assert_eq!(airports, ["ATL", "PHL"]);
    assert!(text.contains("LTO: HC") && text.contains("CCD: HC"), "{text}");
}

#[test]
fn report_without_outputs_is_a_missing_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let err = pipeline::report(dir.path(), 5).unwrap_err();
    assert!(matches!(err, PipelineError::MissingArtifact { .. }));
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn report_on_corrupt_outputs_is_an_artifact_error() {
    let out = tempfile::tempdir().unwrap();
    pipeline::run(&dl2441_config(out.path()), None).unwrap();
    fs::write(out.path().join(COVERAGE_REPORT_CSV), "metric,value\n").unwrap();
    assert_eq!(pipeline::report(out.path(), 5).unwrap_err().exit_code(), 3);
}

#[test]
fn unep_baseline_column_only_when_configured() {
    let out = tempfile::tempdir().unwrap();
    let mut cfg = dl2441_config(out.path());
    let summary = pipeline::run(&cfg, None).unwrap();
    assert!(summary.warnings.iter().any(|w| w.contains("UNEP")));
    let path: PathBuf = out.path().join(SCATTER_SEAT_MILE_CSV);
    assert!(!read_table(&path)[0].contains_key("unep_baseline"));

    cfg.unep = Some(UnepBaseline {
        short_haul_co2_per_seat_mile: 0.2,
        long_haul_co2_per_seat_mile: 0.15,
        cutoff_mi: 500.0,
    });
    let summary = pipeline::run(&cfg, None).unwrap();
    assert!(summary.warnings.iter().all(|w| !w.contains("UNEP")));
    assert_eq!(read_table(&path)[0]["unep_baseline"], "0.150000");
}

#[test]
fn distance_key_needs_a_distance_axis() {
    let out = tempfile::tempdir().unwrap();
    let mut cfg = dl2441_config(out.path());
    cfg.interpolation_key = InterpolationKey::Distance;
    let v = pipeline::validate(&cfg).unwrap();
    assert_eq!(v.coverage.causes[&IncomputableCause::MissingCcdProfile], 1);
    let s = pipeline::run(&cfg, None).unwrap();
    assert_eq!(s.coverage, v.coverage);
}

#[test]
fn distance_key_on_synthetic_profiles() {
    let dir = tempfile::tempdir().unwrap();
    let spec = SyntheticSpec {
        flights: 300,
        tails: 50,
        ..SyntheticSpec::default()
    };
    let mut cfg = RunConfig::load(&SyntheticCorpus::generate(&spec).write_with_config(dir.path()).unwrap()).unwrap();
    cfg.interpolation_key = InterpolationKey::Distance;
    let s = pipeline::run(&cfg, None).unwrap();
    assert_eq!(s.coverage.computed_flights, 300);
}
