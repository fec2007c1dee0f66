//! End-to-end batch: ingest, resolve, compute, aggregate, write.
//!
//! Stages run one after another. Only the per-flight stage is parallel, on
//! a dedicated worker pool over immutable tables; results come back in
//! input order, and every total is an exact fixed-point sum, so outputs are
//! byte-identical for any worker count.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::aggregate::{
    aggregate_airframes, aggregate_airlines, aggregate_airports, aggregate_engines, aggregate_routes,
    gas_breakdowns, scatter_datasets, AirportLtoSummary, FlightResult, GasBreakdown, GroupSummary, ScatterPoint,
    UnepBaseline,
};
use crate::config::{ConfigError, RunConfig};
use crate::emissions::{
    flight_emissions, CcdTable, Co2eFactors, EmissionOptions, EngineDatabank, InterpolationKey, RangeFlag,
};
use crate::gas::Gas;
use crate::ingest::{
    parse_b43, parse_bada_ccd, parse_engine_codes, parse_icao_databank, parse_ontime, parse_tail_registry,
    AirframeRecord, EngineCodeRecord, FlightRecord, IngestError, IngestReport, TailEngineRecord,
};
use crate::matching::{
    resolve_flight, ConfigTableError, EngineSource, FamilyFallbackTable, IncomputableCause, MatchInputs,
    MatchTables, NormalizationRuleSet, PopularEngineTable, ResolvedFlight,
};

pub const FLIGHT_EMISSIONS_CSV: &str = "flight_emissions.csv";
pub const INCOMPUTABLE_FLIGHTS_CSV: &str = "incomputable_flights.csv";
pub const AIRLINE_SUMMARY_CSV: &str = "airline_summary.csv";
pub const ROUTE_SUMMARY_CSV: &str = "route_summary.csv";
pub const AIRFRAME_SUMMARY_CSV: &str = "airframe_summary.csv";
pub const ENGINE_SUMMARY_CSV: &str = "engine_summary.csv";
pub const AIRPORT_LTO_CSV: &str = "airport_lto.csv";
pub const GAS_BREAKDOWN_CSV: &str = "gas_breakdown.csv";
pub const SCATTER_CO2E_CSV: &str = "scatter_co2e.csv";
pub const SCATTER_SEAT_MILE_CSV: &str = "scatter_seat_mile.csv";
pub const COVERAGE_REPORT_CSV: &str = "coverage_report.csv";

/// Every file `run` writes, in the order written.
pub const OUTPUT_FILES: [&str; 11] = [
    FLIGHT_EMISSIONS_CSV,
    INCOMPUTABLE_FLIGHTS_CSV,
    AIRLINE_SUMMARY_CSV,
    ROUTE_SUMMARY_CSV,
    AIRFRAME_SUMMARY_CSV,
    ENGINE_SUMMARY_CSV,
    AIRPORT_LTO_CSV,
    GAS_BREAKDOWN_CSV,
    SCATTER_CO2E_CSV,
    SCATTER_SEAT_MILE_CSV,
    COVERAGE_REPORT_CSV,
];

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    MatchConfig(#[from] ConfigTableError),
    #[error("cannot start worker pool: {0}")]
    ThreadPool(String),
    #[error("cannot write {}: {source}", path.display())]
    Output {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("missing run output {}", path.display())]
    MissingArtifact { path: PathBuf },
    #[error("malformed run output {}: {reason}", path.display())]
    BadArtifact { path: PathBuf, reason: String },
}

impl PipelineError {
    /// Process exit status: 2 for input or configuration problems, 3 for
    /// missing or unreadable run outputs, 1 for anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_)
            | PipelineError::Ingest(_)
            | PipelineError::MatchConfig(_)
            | PipelineError::ThreadPool(_) => 2,
            PipelineError::MissingArtifact { .. } | PipelineError::BadArtifact { .. } => 3,
            PipelineError::Output { .. } => 1,
        }
    }
}

/// All parsed inputs of a run.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub flights: Vec<FlightRecord>,
    pub airframes: Vec<AirframeRecord>,
    pub registry: Vec<TailEngineRecord>,
    pub engine_codes: Vec<EngineCodeRecord>,
    pub databank: EngineDatabank,
    pub ccd: CcdTable,
    pub rules: NormalizationRuleSet,
    pub family_fallback: FamilyFallbackTable,
    pub popular_override: Option<PopularEngineTable>,
    /// One report per input table.
    pub reports: Vec<IngestReport>,
}

impl Dataset {
    pub fn load(config: &RunConfig) -> Result<Dataset, PipelineError> {
        let paths = &config.inputs;
        let (flights, r1) = parse_ontime(&paths.ontime)?;
        let (airframes, r2) = parse_b43(&paths.b43)?;
        let (registry, r3) = parse_tail_registry(&paths.tail_registry)?;
        let (engine_codes, r4) = parse_engine_codes(&paths.engine_codes)?;
        let (engines, r5) = parse_icao_databank(&paths.icao_engines)?;
        let (profiles, r6) = parse_bada_ccd(&paths.bada_ccd)?;
        let rules = match &config.normalization_rules {
            Some(p) => NormalizationRuleSet::load(p)?,
            None => NormalizationRuleSet::builtin(),
        };
        let family_fallback = match &config.family_fallback {
            Some(p) => FamilyFallbackTable::load(p)?,
            None => FamilyFallbackTable::builtin(),
        };
        let popular_override = config
            .popular_engine_override
            .as_deref()
            .map(PopularEngineTable::load)
            .transpose()?;
        Ok(Dataset {
            flights,
            airframes,
            registry,
            engine_codes,
            databank: engines.into_iter().collect(),
            ccd: profiles.into_iter().collect(),
            rules,
            family_fallback,
            popular_override,
            reports: vec![r1, r2, r3, r4, r5, r6],
        })
    }

    pub fn match_tables(&self, threshold: f64) -> MatchTables {
        MatchTables::build(MatchInputs {
            airframes: &self.airframes,
            registry: &self.registry,
            engine_codes: &self.engine_codes,
            databank: &self.databank,
            ccd: &self.ccd,
            rules: &self.rules,
            family_fallback: &self.family_fallback,
            popular_override: self.popular_override.as_ref(),
            threshold,
        })
    }
}

/// Resolves and costs one flight. A flight whose engine factors or CCD
/// profile turn out to be missing is withheld with that cause.
pub fn compute_flight(
    flight: &FlightRecord,
    tables: &MatchTables,
    databank: &EngineDatabank,
    ccd: &CcdTable,
    options: &EmissionOptions,
) -> FlightResult {
    let mut resolved = resolve_flight(flight, tables);
    let emissions = if resolved.is_computable() {
        match flight_emissions(&resolved, databank, ccd, options) {
            Ok(e) => Some(e),
            Err(cause) => {
                resolved.withhold(cause);
                None
            }
        }
    } else {
        None
    };
    FlightResult { resolved, emissions }
}

/// [`compute_flight`] over every flight, in parallel, results in input
/// order.
pub fn compute_all(
    dataset: &Dataset,
    tables: &MatchTables,
    options: &EmissionOptions,
) -> Vec<FlightResult> {
    dataset
        .flights
        .par_iter()
        .map(|f| compute_flight(f, tables, &dataset.databank, &dataset.ccd, options))
        .collect()
}

/// Cause a resolved flight would be withheld for at compute time, checked
/// without computing anything.
fn preflight(rf: &ResolvedFlight, dataset: &Dataset, key: InterpolationKey) -> Option<IncomputableCause> {
    if let Some(cause) = rf.provenance.incomputable {
        return Some(cause);
    }
    let res = rf.resolution.as_ref()?;
    if !dataset.databank.contains(&res.engine_uid) {
        return Some(IncomputableCause::MissingEngineFactors);
    }
    match dataset.ccd.get(&res.emissions_type) {
        Some(p) if key == InterpolationKey::Time || p.has_distance_axis() => None,
        _ => Some(IncomputableCause::MissingCcdProfile),
    }
}

/// Flight counts by outcome.
///
/// The engine-source, family-fallback and extrapolation tallies count
/// computed flights only.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoverageReport {
    pub total_flights: usize,
    pub computed_flights: usize,
    /// Every cause, including those with a zero count.
    pub causes: BTreeMap<IncomputableCause, usize>,
    pub engine_exact: usize,
    pub engine_jaccard: usize,
    pub engine_popular_fallback: usize,
    pub family_fallback: usize,
    pub extrapolated_low: usize,
    pub extrapolated_high: usize,
}

impl CoverageReport {
    fn empty() -> Self {
        CoverageReport {
            causes: IncomputableCause::ALL.iter().map(|&c| (c, 0)).collect(),
            ..CoverageReport::default()
        }
    }

    fn count(&mut self, rf: &ResolvedFlight, cause: Option<IncomputableCause>, range: Option<RangeFlag>) {
        self.total_flights += 1;
        if let Some(c) = cause {
            *self.causes.entry(c).or_default() += 1;
            return;
        }
        self.computed_flights += 1;
        match rf.provenance.engine {
            Some(EngineSource::Exact) => self.engine_exact += 1,
            Some(EngineSource::Jaccard) => self.engine_jaccard += 1,
            Some(EngineSource::PopularFallback) => self.engine_popular_fallback += 1,
            None => {}
        }
        if rf.provenance.family_fallback {
            self.family_fallback += 1;
        }
        match range {
            Some(RangeFlag::ExtrapolatedLow) => self.extrapolated_low += 1,
            Some(RangeFlag::ExtrapolatedHigh) => self.extrapolated_high += 1,
            _ => {}
        }
    }

    /// Tallies computed results.
    pub fn from_results(results: &[FlightResult]) -> Self {
        let mut report = Self::empty();
        for r in results {
            report.count(
                &r.resolved,
                r.resolved.provenance.incomputable,
                r.emissions.map(|e| e.ccd_range),
            );
        }
        report
    }

    /// `computed / total`, absent for an empty flight table.
    pub fn coverage(&self) -> Option<f64> {
        (self.total_flights > 0).then(|| self.computed_flights as f64 / self.total_flights as f64)
    }

    pub fn incomputable(&self) -> usize {
        self.causes.values().sum()
    }

    /// `(metric, value)` rows as written to the coverage report file.
    pub fn rows(&self) -> Vec<(String, String)> {
        let mut rows = vec![
            ("total_flights".to_string(), self.total_flights.to_string()),
            ("computed_flights".to_string(), self.computed_flights.to_string()),
            (
                "coverage_fraction".to_string(),
                self.coverage().map(ratio).unwrap_or_default(),
            ),
        ];
        for (cause, n) in &self.causes {
            rows.push((format!("incomputable_{}", cause.as_str().to_lowercase()), n.to_string()));
        }
        for (name, n) in [
            ("engine_exact", self.engine_exact),
            ("engine_jaccard", self.engine_jaccard),
            ("engine_popular_fallback", self.engine_popular_fallback),
            ("family_fallback", self.family_fallback),
            ("extrapolated_low", self.extrapolated_low),
            ("extrapolated_high", self.extrapolated_high),
        ] {
            rows.push((name.to_string(), n.to_string()));
        }
        rows
    }
}

/// Result of a dry run.
#[derive(Debug, Clone)]
pub struct Validation {
    pub coverage: CoverageReport,
    pub ingest: Vec<IngestReport>,
    pub warnings: Vec<String>,
}

/// Parses and resolves without computing emissions. The extrapolation
/// tallies of the returned coverage are always zero.
pub fn validate(config: &RunConfig) -> Result<Validation, PipelineError> {
    let dataset = Dataset::load(config)?;
    let tables = dataset.match_tables(config.jaccard_threshold);
    let mut coverage = CoverageReport::empty();
    for f in &dataset.flights {
        let rf = resolve_flight(f, &tables);
        let cause = preflight(&rf, &dataset, config.interpolation_key);
        coverage.count(&rf, cause, None);
    }
    Ok(Validation {
        coverage,
        ingest: dataset.reports,
        warnings: tables.warnings().to_vec(),
    })
}

/// What a completed run produced.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub coverage: CoverageReport,
    pub ingest: Vec<IngestReport>,
    pub warnings: Vec<String>,
    pub output_dir: PathBuf,
}

/// Full run with `threads` workers (`None`: one per available core).
///
/// Outputs are written to a scratch directory inside the output directory
/// and moved into place only after all of them were written, so a failed
/// run leaves no partial files behind.
pub fn run(config: &RunConfig, threads: Option<usize>) -> Result<RunSummary, PipelineError> {
    let dataset = Dataset::load(config)?;
    let tables = dataset.match_tables(config.jaccard_threshold);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| PipelineError::ThreadPool(e.to_string()))?;
    let options = config.emission_options();
    let results = pool.install(|| compute_all(&dataset, &tables, &options));

    let mut warnings = tables.warnings().to_vec();
    if config.unep.is_none() {
        warnings.push(format!(
            "no UNEP baseline configured: {SCATTER_SEAT_MILE_CSV} has no baseline column"
        ));
    }
    let coverage = CoverageReport::from_results(&results);
    write_outputs(&config.output_dir, &results, &config.factors, config.unep.as_ref(), &coverage)?;
    Ok(RunSummary {
        coverage,
        ingest: dataset.reports,
        warnings,
        output_dir: config.output_dir.clone(),
    })
}

fn mass(v: f64) -> String {
    format!("{v:.2}")
}

fn ratio(v: f64) -> String {
    format!("{v:.6}")
}

type Rows = Vec<Vec<String>>;

fn flight_rows(results: &[FlightResult]) -> (Rows, Rows) {
    let mut computed = Vec::new();
    let mut withheld = Vec::new();
    for (i, r) in results.iter().enumerate() {
        let f = &r.resolved.flight;
        let ident = [
            i.to_string(),
            f.flight_date.format("%Y-%m-%d").to_string(),
            f.carrier.clone(),
            f.flight_number.clone(),
            f.tail_number.clone().unwrap_or_default(),
            f.origin.clone(),
            f.destination.clone(),
        ];
        match (&r.emissions, &r.resolved.resolution) {
            (Some(e), Some(res)) => {
                let mut row = ident.to_vec();
                row.extend([
                    res.canonical_type.clone(),
                    res.emissions_type.clone(),
                    res.engine_uid.clone(),
                    res.seat_count.to_string(),
                    ratio(res.efficiency_factor),
                    f.air_time_min.map(|t| t.to_string()).unwrap_or_default(),
                    f.distance_mi.to_string(),
                ]);
                row.extend(Gas::ALL.map(|g| mass(e.lto[g])));
                row.extend(Gas::ALL.map(|g| mass(e.ccd[g])));
                row.extend([
                    mass(e.lto_co2e_kg),
                    mass(e.ccd_co2e_kg),
                    mass(e.total_co2e_kg),
                    mass(e.per_seat_co2e_kg),
                    ratio(e.per_seat_mile_co2_kg),
                ]);
                let mut flags = r.resolved.provenance.flags();
                flags.extend(e.ccd_range.as_flag());
                row.push(flags.join("|"));
                computed.push(row);
            }
            _ => {
                let mut row = ident.to_vec();
                let cause = r.resolved.provenance.incomputable.map(|c| c.as_str()).unwrap_or_default();
                row.push(cause.to_string());
                withheld.push(row);
            }
        }
    }
    (computed, withheld)
}

fn gas_columns(prefix: &str) -> impl Iterator<Item = String> + '_ {
    Gas::ALL.into_iter().map(move |g| format!("{prefix}{}_kg", g.column()))
}

fn flight_header() -> Vec<String> {
    let mut h: Vec<String> = [
        "flight_index",
        "flight_date",
        "carrier",
        "flight_number",
        "tail_number",
        "origin",
        "dest",
        "canonical_type",
        "emissions_type",
        "engine_uid",
        "seat_count",
        "efficiency_factor",
        "air_time_min",
        "distance_mi",
    ]
    .map(String::from)
    .to_vec();
    h.extend(gas_columns("lto_"));
    h.extend(gas_columns("ccd_"));
    h.extend(
        [
            "lto_co2e_kg",
            "ccd_co2e_kg",
            "total_co2e_kg",
            "per_seat_co2e_kg",
            "per_seat_mile_co2_kg",
            "flags",
        ]
        .map(String::from),
    );
    h
}

const SUMMARY_COLUMNS: [&str; 7] = [
    "total_flights",
    "emission_flights",
    "total_seats",
    "total_co2_kg",
    "total_co2e_kg",
    "co2_per_seat_mile",
    "co2e_per_seat_mile",
];

fn summary_table(key: &str, groups: &[GroupSummary]) -> (Vec<String>, Rows) {
    let mut header = vec![key.to_string()];
    header.extend(SUMMARY_COLUMNS.map(String::from));
    let rows = groups
        .iter()
        .map(|s| {
            vec![
                s.key.clone(),
                s.total_flights.to_string(),
                s.emission_flights.to_string(),
                s.total_seats.to_string(),
                mass(s.total_co2_kg),
                mass(s.total_co2e_kg),
                s.co2_per_seat_mile.map(ratio).unwrap_or_default(),
                s.co2e_per_seat_mile.map(ratio).unwrap_or_default(),
            ]
        })
        .collect();
    (header, rows)
}

fn airport_table(airports: &[AirportLtoSummary]) -> (Vec<String>, Rows) {
    let mut header = vec!["airport".to_string()];
    header.extend(gas_columns(""));
    header.push("lto_co2e_kg".into());
    let rows = airports
        .iter()
        .map(|a| {
            let v = a.lto.to_vector();
            let mut row = vec![a.airport.clone()];
            row.extend(Gas::ALL.map(|g| mass(v[g])));
            row.push(mass(a.lto_co2e_kg));
            row
        })
        .collect();
    (header, rows)
}

fn breakdown_table(parts: [&GasBreakdown; 2]) -> (Vec<String>, Rows) {
    let header = ["cycle", "gas", "raw_kg", "co2e_kg", "co2e_share"].map(String::from).to_vec();
    let rows = parts
        .iter()
        .flat_map(|b| {
            Gas::ALL.map(|g| {
                vec![
                    b.cycle.to_string(),
                    g.to_string(),
                    mass(b.raw_kg[g]),
                    mass(b.co2e_kg[g]),
                    b.co2e_share(g).map(ratio).unwrap_or_default(),
                ]
            })
        })
        .collect();
    (header, rows)
}

fn scatter_table(value: &str, points: &[ScatterPoint], with_baseline: bool, value_fmt: fn(f64) -> String) -> (Vec<String>, Rows) {
    let mut header = vec!["distance_mi".to_string(), value.to_string()];
    if with_baseline {
        header.push("unep_baseline".into());
    }
    header.extend(["canonical_type", "engine_uid", "carrier"].map(String::from));
    let rows = points
        .iter()
        .map(|p| {
            let mut row = vec![p.distance_mi.to_string(), value_fmt(p.value)];
            if with_baseline {
                row.push(p.baseline.map(ratio).unwrap_or_default());
            }
            row.extend([p.canonical_type.clone(), p.engine_uid.clone(), p.carrier.clone()]);
            row
        })
        .collect();
    (header, rows)
}

fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<(), PipelineError> {
    let fail = |source: io::Error| PipelineError::Output {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(|e| fail(e.into()))?;
    w.write_record(header).map_err(|e| fail(e.into()))?;
    for row in rows {
        w.write_record(row).map_err(|e| fail(e.into()))?;
    }
    w.flush().map_err(fail)
}

/// Writes every output file for `results` into `dir`, all or nothing.
pub fn write_outputs(
    dir: &Path,
    results: &[FlightResult],
    factors: &Co2eFactors,
    unep: Option<&UnepBaseline>,
    coverage: &CoverageReport,
) -> Result<(), PipelineError> {
    let out_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source: io::Error| PipelineError::Output { path, source }
    };
    fs::create_dir_all(dir).map_err(out_err(dir))?;
    let scratch = tempfile::Builder::new()
        .prefix(".aeroemit-run-")
        .tempdir_in(dir)
        .map_err(out_err(dir))?;

    let (computed, withheld) = flight_rows(results);
    let mut withheld_header: Vec<String> = flight_header()[..7].to_vec();
    withheld_header.push("cause".into());
    let (lto, ccd) = gas_breakdowns(results, factors);
    let (co2e_points, seat_mile_points) = scatter_datasets(results, unep);
    let coverage_rows: Rows = coverage.rows().into_iter().map(|(k, v)| vec![k, v]).collect();

    let tables: Vec<(&str, (Vec<String>, Rows))> = vec![
        (FLIGHT_EMISSIONS_CSV, (flight_header(), computed)),
        (INCOMPUTABLE_FLIGHTS_CSV, (withheld_header, withheld)),
        (AIRLINE_SUMMARY_CSV, summary_table("carrier", &aggregate_airlines(results, factors))),
        (ROUTE_SUMMARY_CSV, summary_table("route", &aggregate_routes(results, factors))),
        (AIRFRAME_SUMMARY_CSV, summary_table("canonical_type", &aggregate_airframes(results, factors))),
        (ENGINE_SUMMARY_CSV, summary_table("engine_uid", &aggregate_engines(results, factors))),
        (AIRPORT_LTO_CSV, airport_table(&aggregate_airports(results, factors))),
        (GAS_BREAKDOWN_CSV, breakdown_table([&lto, &ccd])),
        (SCATTER_CO2E_CSV, scatter_table("co2e_kg", &co2e_points, false, mass)),
        (
            SCATTER_SEAT_MILE_CSV,
            scatter_table("co2_per_seat_mile", &seat_mile_points, unep.is_some(), ratio),
        ),
        (
            COVERAGE_REPORT_CSV,
            (vec!["metric".into(), "value".into()], coverage_rows),
        ),
    ];
    for (name, (header, rows)) in &tables {
        write_csv(&scratch.path().join(name), header, rows)?;
    }
    for (name, _) in &tables {
        let target = dir.join(name);
        fs::rename(scratch.path().join(name), &target).map_err(out_err(&target))?;
    }
    Ok(())
}

struct Artifact {
    path: PathBuf,
    rows: Vec<csv::StringRecord>,
    header: csv::StringRecord,
}

impl Artifact {
    fn read(dir: &Path, name: &str) -> Result<Artifact, PipelineError> {
        let path = dir.join(name);
        if !path.is_file() {
            return Err(PipelineError::MissingArtifact { path });
        }
        let bad = |path: &Path, e: csv::Error| PipelineError::BadArtifact {
            path: path.to_path_buf(),
            reason: e.to_string(),
        };
        let mut reader = csv::Reader::from_path(&path).map_err(|e| bad(&path, e))?;
        let header = reader.headers().map_err(|e| bad(&path, e))?.clone();
        let rows = reader
            .records()
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| bad(&path, e))?;
        Ok(Artifact { path, rows, header })
    }

    fn column(&self, name: &str) -> Result<usize, PipelineError> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| PipelineError::BadArtifact {
                path: self.path.clone(),
                reason: format!("no column {name}"),
            })
    }

    fn text<'a>(&self, row: &'a csv::StringRecord, col: usize) -> &'a str {
        row.get(col).unwrap_or("")
    }

    fn number(&self, row: &csv::StringRecord, col: usize) -> Result<f64, PipelineError> {
        let s = self.text(row, col);
        s.parse().map_err(|_| PipelineError::BadArtifact {
            path: self.path.clone(),
            reason: format!("not a number: {s:?}"),
        })
    }

    /// `(key, value)` pairs ranked by value descending, then key.
    fn ranked(&self, key: &str, value: &str) -> Result<Vec<(String, f64)>, PipelineError> {
        let (k, v) = (self.column(key)?, self.column(value)?);
        let mut out = self
            .rows
            .iter()
            .map(|r| Ok((self.text(r, k).to_string(), self.number(r, v)?)))
            .collect::<Result<Vec<_>, PipelineError>>()?;
        out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        Ok(out)
    }
}

/// Human-readable summary of a finished run's outputs: coverage, the `top`
/// carriers and airports by CO₂e, and each cycle's CO₂e share per gas.
pub fn report(dir: &Path, top: usize) -> Result<String, PipelineError> {
    let coverage = Artifact::read(dir, COVERAGE_REPORT_CSV)?;
    let airlines = Artifact::read(dir, AIRLINE_SUMMARY_CSV)?;
    let airports = Artifact::read(dir, AIRPORT_LTO_CSV)?;
    let gases = Artifact::read(dir, GAS_BREAKDOWN_CSV)?;

    let metrics: BTreeMap<&str, &str> = coverage
        .rows
        .iter()
        .filter_map(|r| Some((r.get(0)?, r.get(1)?)))
        .collect();
    let metric = |name: &str| -> Result<usize, PipelineError> {
        metrics
            .get(name)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| PipelineError::BadArtifact {
                path: coverage.path.clone(),
                reason: format!("missing metric {name}"),
            })
    };
    let total = metric("total_flights")?;
    let computed = metric("computed_flights")?;
    if computed == 0 {
        return Ok("no computed flights\n".to_string());
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        "coverage: {computed} of {total} flights computed ({:.2}%)",
        100.0 * computed as f64 / total as f64
    );

    let _ = writeln!(out, "\ntop airlines by CO2e");
    let psm = airlines.column("co2e_per_seat_mile")?;
    let flights = airlines.column("emission_flights")?;
    let key = airlines.column("carrier")?;
    let by_carrier: BTreeMap<&str, &csv::StringRecord> =
        airlines.rows.iter().map(|r| (airlines.text(r, key), r)).collect();
    let _ = writeln!(out, "  {:<4} {:<8} {:>10} {:>18} {:>16}", "rank", "carrier", "flights", "CO2e kg", "CO2e/seat-mile");
    for (i, (carrier, co2e)) in airlines.ranked("carrier", "total_co2e_kg")?.into_iter().take(top).enumerate() {
        let row = by_carrier[carrier.as_str()];
        let _ = writeln!(
            out,
            "  {:<4} {:<8} {:>10} {:>18.2} {:>16}",
            i + 1,
            carrier,
            airlines.text(row, flights),
            co2e,
            airlines.text(row, psm),
        );
    }

    let _ = writeln!(out, "\ntop airports by LTO CO2e");
    let _ = writeln!(out, "  {:<4} {:<8} {:>18}", "rank", "airport", "LTO CO2e kg");
    for (i, (airport, co2e)) in airports.ranked("airport", "lto_co2e_kg")?.into_iter().take(top).enumerate() {
        let _ = writeln!(out, "  {:<4} {:<8} {:>18.2}", i + 1, airport, co2e);
    }

    let _ = writeln!(out, "\nCO2e share by gas");
    let (cycle, gas, share) = (gases.column("cycle")?, gases.column("gas")?, gases.column("co2e_share")?);
    let mut lines: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for r in &gases.rows {
        let pct = match gases.text(r, share) {
            "" => "n/a".to_string(),
            _ => format!("{:.1}%", 100.0 * gases.number(r, share)?),
        };
        lines
            .entry(gases.text(r, cycle).to_string())
            .or_default()
            .push(format!("{} {pct}", gases.text(r, gas)));
    }
    for c in ["LTO", "CCD"] {
        if let Some(parts) = lines.get(c) {
            let _ = writeln!(out, "  {c}: {}", parts.join(", "));
        }
    }
    Ok(out)
}
