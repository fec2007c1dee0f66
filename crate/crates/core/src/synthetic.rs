//! Deterministic synthetic corpus in the six input schemas.
//!
//! The real inputs are user-supplied downloads (and the CCD tables are
//! licence-restricted), so tests, benchmarks and the guide run on a
//! generated world instead: airframe types spelled several ways, engines
//! reachable by exact UID, token match, FAA code or only through the
//! popular-engine fallback, two family-fallback types, and flights between
//! real airport codes. Knock-outs blank tail numbers or air times on a
//! chosen number of flights so coverage accounting can be checked exactly.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use chrono::{Duration, NaiveDate};
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::emissions::{CcdProfile, EngineLtoFactors, Knot};
use crate::gas::GasVector;
use crate::ingest::{
    write_b43, write_bada_ccd, write_engine_codes, write_icao_databank, write_ontime, write_tail_registry,
    AirframeRecord, EngineCodeRecord, FlightRecord, TailEngineRecord, DEFAULT_ENGINE_COUNT,
};

/// Airframe types in the corpus, with the B-43 spellings used for them and
/// a nominal seat count. The last two have no CCD profile of their own and
/// reach one through the built-in family fallback table.
const AIRFRAMES: [(&str, &[&str], u32); 20] = [
    ("737-800", &["B737-800", "737/800", "737-8NG", "737-832"], 160),
    ("737-900ER", &["B737-900ER", "737-932ER", "B739ER"], 180),
    ("737-900", &["737-924", "B737-900"], 167),
    ("737-700", &["B737-700", "737-7H4", "737-76N"], 137),
    ("A319-100", &["A319-112", "A319-131", "A319"], 128),
    ("A320-200", &["A320-214", "A320-232", "A320"], 150),
    ("A321-200", &["A321-211", "A321-231"], 190),
    ("A321NEO", &["A321-271N", "A321NEO"], 196),
    ("717-200", &["B717-200", "717-2BD"], 110),
    ("757-200", &["757-232", "B757-200"], 180),
    ("767-300", &["767-332ER", "B767-300"], 211),
    ("777-200", &["777-222", "B777-200ER"], 276),
    ("787-9", &["B787-9", "787-9"], 252),
    ("A330-300", &["A330-323", "A330-343"], 291),
    ("E175", &["ERJ-175LR", "ERJ 170-200 LR", "E175"], 76),
    ("CRJ-900", &["CRJ-900", "CL-600-2D24"], 76),
    ("CRJ-700", &["CRJ-700", "CL-600-2C10"], 65),
    ("ERJ-145", &["ERJ-145", "EMB-145LR"], 50),
    ("737-8", &["737 MAX 8", "B38M", "737-8"], 172),
    ("A320NEO", &["A320-251N", "A320NEO"], 157),
];

/// The corpus's CCD-profiled types: all but the last two.
const PROFILED: usize = 18;

const AIRPORTS: [&str; 50] = [
    "ATL", "DFW", "DEN", "ORD", "LAX", "CLT", "LAS", "PHX", "MCO", "SEA", "MIA", "IAH", "JFK", "FLL", "EWR",
    "SFO", "MSP", "BOS", "DTW", "LGA", "PHL", "SLC", "BWI", "DCA", "SAN", "IAD", "TPA", "BNA", "AUS", "MDW",
    "HNL", "DAL", "PDX", "STL", "RDU", "HOU", "SMF", "MSY", "SJC", "SNA", "MCI", "OAK", "SAT", "RSW", "CLE",
    "IND", "PIT", "CVG", "CMH", "JAX",
];

const CARRIERS: [&str; 10] = ["WN", "DL", "AA", "UA", "AS", "B6", "NK", "F9", "G4", "HA"];

/// Shape of a generated corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub seed: u64,
    pub flights: usize,
    pub tails: usize,
    /// Flights whose tail number is blanked.
    pub missing_tail: usize,
    /// Flights whose air time is blanked (disjoint from `missing_tail`).
    pub missing_air_time: usize,
    /// Flights whose tail number is replaced by one absent from B-43
    /// (disjoint from both of the above).
    pub unknown_tail: usize,
}

impl Default for SyntheticSpec {
    /// 5,000 flights over 400 tails, 20 airframe types, 40 engines and 50
    /// airports, with no knock-outs.
    fn default() -> Self {
        SyntheticSpec {
            seed: 20_210_901,
            flights: 5000,
            tails: 400,
            missing_tail: 0,
            missing_air_time: 0,
            unknown_tail: 0,
        }
    }
}

/// A generated corpus, held in memory.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCorpus {
    pub flights: Vec<FlightRecord>,
    pub airframes: Vec<AirframeRecord>,
    pub registry: Vec<TailEngineRecord>,
    pub engine_codes: Vec<EngineCodeRecord>,
    pub engines: Vec<EngineLtoFactors>,
    pub profiles: Vec<CcdProfile>,
}

/// File names used by [`SyntheticCorpus::write_to`].
pub const CORPUS_FILES: [&str; 6] = [
    "ontime.csv",
    "b43.csv",
    "tail_registry.csv",
    "engine_codes.csv",
    "icao_engines.csv",
    "bada_ccd.csv",
];

/// Two engine variants per airframe type, named `SYN<type>-<n>`.
fn engine_uid(type_index: usize, variant: usize) -> String {
    format!("SYN{:02}-{}B{}", type_index, variant + 1, 20 + 3 * type_index % 11)
}

fn round_to(v: f64, digits: i32) -> f64 {
    let p = 10f64.powi(digits);
    (v * p).round() / p
}

fn synth_engine(rng: &mut ChaCha8Rng, uid: String, size: f64) -> EngineLtoFactors {
    // nominal per-mode rates (kg/s) for a mid-size turbofan, scaled by size
    let nominal = [
        GasVector::new(0.00004, 4.0, 0.0004, 0.03),
        GasVector::new(0.00002, 3.2, 0.0002, 0.018),
        GasVector::new(0.00002, 1.1, 0.001, 0.003),
        GasVector::new(0.00017, 0.35, 0.0032, 0.0005),
    ];
    let rates = nominal.map(|v| GasVector::from_fn(|g| round_to(v[g] * size * rng.gen_range(0.7..1.3), 9)));
    EngineLtoFactors::new(uid, rates)
}

fn synth_profile(rng: &mut ChaCha8Rng, ty: &str, size: f64) -> CcdProfile {
    let count = rng.gen_range(6..=10);
    let mut duration = rng.gen_range(18.0..26.0_f64).round();
    let mut knots = Vec::with_capacity(count);
    for _ in 0..count {
        let distance = round_to(duration * rng.gen_range(6.0..7.5), 1);
        let co2 = round_to(size * (140.0 * duration - 500.0).max(60.0) * rng.gen_range(0.97..1.03), 2);
        let emissions = GasVector::new(
            round_to(co2 * 6.5e-5, 4),
            co2,
            round_to(co2 * 3.5e-4 + 1.5, 4),
            round_to(co2 * 4.4e-3, 4),
        );
        knots.push(Knot {
            duration_min: duration,
            distance_nm: Some(distance),
            emissions,
        });
        duration += rng.gen_range(20.0..70.0_f64).round();
    }
    // cumulative sums keep each gas increasing with duration and distance
    for i in 1..knots.len() {
        let prev = knots[i - 1];
        let k = &mut knots[i];
        k.distance_nm = k.distance_nm.zip(prev.distance_nm).map(|(d, p)| d.max(p + 1.0));
        k.emissions = GasVector::from_fn(|g| k.emissions[g].max(prev.emissions[g] + 0.01));
    }
    CcdProfile::new(ty, knots).expect("generated knots are valid")
}

impl SyntheticCorpus {
    pub fn generate(spec: &SyntheticSpec) -> SyntheticCorpus {
        assert!(
            spec.missing_tail + spec.missing_air_time + spec.unknown_tail <= spec.flights,
            "more knock-outs than flights"
        );
        assert!(spec.tails >= AIRFRAMES.len(), "need at least one tail per airframe type");
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

        let sizes: Vec<f64> = AIRFRAMES
            .iter()
            .map(|(_, _, seats)| (f64::from(*seats) / 160.0).sqrt())
            .collect();
        let mut engines = Vec::new();
        let mut engine_codes = Vec::new();
        for (t, size) in sizes.iter().enumerate() {
            for v in 0..2 {
                let uid = engine_uid(t, v);
                engine_codes.push(EngineCodeRecord {
                    faa_code: format!("{}", 50000 + 10 * t + v),
                    designation: format!("SYNTH AERO {uid}"),
                });
                engines.push(synth_engine(&mut rng, uid, *size));
            }
        }
        let profiles: Vec<CcdProfile> = AIRFRAMES[..PROFILED]
            .iter()
            .zip(&sizes)
            .map(|((ty, _, _), size)| synth_profile(&mut rng, ty, *size))
            .collect();

        let mut airframes = Vec::with_capacity(spec.tails);
        let mut registry = Vec::new();
        let mut tail_carrier = Vec::with_capacity(spec.tails);
        for i in 0..spec.tails {
            // every type gets a first tail with an exact registry entry so
            // each type has a popular engine
            let t = if i < AIRFRAMES.len() { i } else { rng.gen_range(0..AIRFRAMES.len()) };
            let (_, spellings, seats) = AIRFRAMES[t];
            let tail = format!("N{}{}", 100 + i, ["A", "B", "C", "D", "E"][i % 5]);
            let raw = spellings[rng.gen_range(0..spellings.len())];
            let seat_count = (f64::from(seats) * rng.gen_range(0.9..1.1)).round() as u32;
            airframes.push(AirframeRecord {
                tail_number: tail.clone(),
                raw_type_designator: raw.to_string(),
                seat_count,
                engine_count: DEFAULT_ENGINE_COUNT,
            });
            let variant = usize::from(rng.gen_bool(0.35));
            let uid = engine_uid(t, variant);
            let designation = match if i < AIRFRAMES.len() { 0 } else { rng.gen_range(0..5) } {
                0 | 1 => Some(uid.clone()),
                2 => Some(uid.replace('-', " ").to_lowercase()),
                3 => Some(format!("{}", 50000 + 10 * t + variant)),
                _ => None,
            };
            if let Some(engine_designation) = designation {
                registry.push(TailEngineRecord {
                    tail_number: tail.clone(),
                    engine_designation,
                });
            }
            tail_carrier.push(CARRIERS[rng.gen_range(0..CARRIERS.len())]);
        }

        let coords: Vec<(f64, f64)> = AIRPORTS
            .iter()
            .map(|_| (rng.gen_range(0.0..2400.0), rng.gen_range(0.0..1200.0)))
            .collect();
        let start = NaiveDate::from_ymd_opt(2021, 7, 1).expect("valid date");
        let mut flights = Vec::with_capacity(spec.flights);
        for n in 0..spec.flights {
            let tail_index = rng.gen_range(0..spec.tails);
            let o = rng.gen_range(0..AIRPORTS.len());
            let mut d = rng.gen_range(0..AIRPORTS.len() - 1);
            if d >= o {
                d += 1;
            }
            let (dx, dy) = (coords[o].0 - coords[d].0, coords[o].1 - coords[d].1);
            let distance_mi = (dx.hypot(dy).max(90.0)).round();
            let air_time = round_to(distance_mi / 7.6 + 12.0 + rng.gen_range(-4.0..6.0), 1);
            let taxi = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| round_to(rng.gen_range(lo..hi), 2);
            let (taxi_in, taxi_out) = if rng.gen_bool(0.03) {
                (None, Some(taxi(&mut rng, 9.0, 30.0)))
            } else {
                (Some(taxi(&mut rng, 3.0, 15.0)), Some(taxi(&mut rng, 9.0, 30.0)))
            };
            flights.push(FlightRecord {
                flight_date: start + Duration::days(rng.gen_range(0..92)),
                carrier: tail_carrier[tail_index].to_string(),
                flight_number: format!("{}", 100 + n % 4900),
                tail_number: Some(airframes[tail_index].tail_number.clone()),
                origin: AIRPORTS[o].to_string(),
                destination: AIRPORTS[d].to_string(),
                air_time_min: Some(air_time),
                taxi_in_min: taxi_in,
                taxi_out_min: taxi_out,
                distance_mi,
            });
        }

        let knocked = spec.missing_tail + spec.missing_air_time + spec.unknown_tail;
        let mut chosen = index::sample(&mut rng, spec.flights, knocked).into_vec();
        chosen.shuffle(&mut rng);
        let (blank_tail, rest) = chosen.split_at(spec.missing_tail);
        let (blank_air, ghost) = rest.split_at(spec.missing_air_time);
        for &i in blank_tail {
            flights[i].tail_number = None;
        }
        for &i in blank_air {
            flights[i].air_time_min = None;
        }
        for (k, &i) in ghost.iter().enumerate() {
            flights[i].tail_number = Some(format!("N9{k:04}Z"));
        }

        SyntheticCorpus {
            flights,
            airframes,
            registry,
            engine_codes,
            engines,
            profiles,
        }
    }

    /// Writes the six tables under `dir` with the names in
    /// [`CORPUS_FILES`].
    pub fn write_to(&self, dir: &Path) -> io::Result<()> {
        fs::create_dir_all(dir)?;
        fn file(dir: &Path, name: &str) -> io::Result<BufWriter<File>> {
            File::create(dir.join(name)).map(BufWriter::new)
        }
        write_ontime(file(dir, CORPUS_FILES[0])?, &self.flights)?;
        write_b43(file(dir, CORPUS_FILES[1])?, &self.airframes)?;
        write_tail_registry(file(dir, CORPUS_FILES[2])?, &self.registry)?;
        write_engine_codes(file(dir, CORPUS_FILES[3])?, &self.engine_codes)?;
        write_icao_databank(file(dir, CORPUS_FILES[4])?, &self.engines)?;
        write_bada_ccd(file(dir, CORPUS_FILES[5])?, &self.profiles)?;
        Ok(())
    }

    /// Writes the tables plus a `config.toml` pointing at them, with
    /// outputs going to `out/`. Returns the config path.
    pub fn write_with_config(&self, dir: &Path) -> io::Result<PathBuf> {
        self.write_to(dir)?;
        let keys = ["ontime", "b43", "tail_registry", "engine_codes", "icao_engines", "bada_ccd"];
        let mut text = String::new();
        for (key, name) in keys.iter().zip(CORPUS_FILES) {
            text.push_str(&format!("{key} = \"{name}\"\n"));
        }
        text.push_str("output_dir = \"out\"\n");
        let path = dir.join("config.toml");
        let mut f = File::create(&path)?;
        f.write_all(text.as_bytes())?;
        Ok(path)
    }

    /// Number of distinct airframe types, engines and airports in use.
    pub fn span(&self) -> (usize, usize, usize) {
        let mut airports: BTreeMap<&str, ()> = BTreeMap::new();
        for f in &self.flights {
            airports.insert(&f.origin, ());
            airports.insert(&f.destination, ());
        }
        (AIRFRAMES.len(), self.engines.len(), airports.len())
    }
}
