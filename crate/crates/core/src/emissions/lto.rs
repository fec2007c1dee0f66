//! Landing and take-off cycle: ICAO mode times, per-engine rates, and the
//! rate × time sum over the four modes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::gas::{Gas, GasVector};

/// ICAO standard time in take-off mode (0.7 min).
pub const TAKEOFF_S: f64 = 42.0;
/// ICAO standard time in climb-out mode (2.2 min).
pub const CLIMBOUT_S: f64 = 132.0;
/// ICAO standard time in approach mode (4 min).
pub const APPROACH_S: f64 = 240.0;
/// ICAO standard taxi/ground-idle time (26 min), used when actual taxi times
/// are not both known.
pub const DEFAULT_IDLE_S: f64 = 1560.0;

/// One of the four LTO operating modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Takeoff,
    Climbout,
    Approach,
    Idle,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Takeoff, Mode::Climbout, Mode::Approach, Mode::Idle];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Takeoff => "TAKEOFF",
            Mode::Climbout => "CLIMBOUT",
            Mode::Approach => "APPROACH",
            Mode::Idle => "IDLE",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "TAKEOFF" => Ok(Mode::Takeoff),
            "CLIMBOUT" => Ok(Mode::Climbout),
            "APPROACH" => Ok(Mode::Approach),
            "IDLE" => Ok(Mode::Idle),
            other => Err(format!(
                "unknown mode {other:?} (expected TAKEOFF, CLIMBOUT, APPROACH or IDLE)"
            )),
        }
    }
}

/// Emission rates (kg/s) of one certified engine, per mode and gas.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineLtoFactors {
    pub engine_uid: String,
    rates: [GasVector; 4],
}

impl EngineLtoFactors {
    /// `rates` is indexed in [`Mode::ALL`] order.
    pub fn new(engine_uid: impl Into<String>, rates: [GasVector; 4]) -> Self {
        EngineLtoFactors {
            engine_uid: engine_uid.into(),
            rates,
        }
    }

    pub fn rates(&self, mode: Mode) -> GasVector {
        self.rates[mode as usize]
    }

    pub fn rate(&self, gas: Gas, mode: Mode) -> f64 {
        self.rates(mode)[gas]
    }
}

/// The engine databank keyed by unique engine ID.
#[derive(Debug, Clone, Default)]
pub struct EngineDatabank {
    engines: BTreeMap<String, EngineLtoFactors>,
}

impl EngineDatabank {
    pub fn get(&self, uid: &str) -> Option<&EngineLtoFactors> {
        self.engines.get(uid)
    }

    pub fn contains(&self, uid: &str) -> bool {
        self.engines.contains_key(uid)
    }

    pub fn len(&self) -> usize {
        self.engines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.engines.is_empty()
    }

    /// Engines in ascending UID order.
    pub fn iter(&self) -> impl Iterator<Item = &EngineLtoFactors> {
        self.engines.values()
    }
}

impl FromIterator<EngineLtoFactors> for EngineDatabank {
    fn from_iter<I: IntoIterator<Item = EngineLtoFactors>>(iter: I) -> Self {
        EngineDatabank {
            engines: iter
                .into_iter()
                .map(|e| (e.engine_uid.clone(), e))
                .collect(),
        }
    }
}

/// Time spent in each LTO mode, in seconds.
///
/// Idle is held as its taxi-out and taxi-in parts so the idle mass can be
/// attributed to the origin and destination airports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LtoTimes {
    pub takeoff_s: f64,
    pub climbout_s: f64,
    pub approach_s: f64,
    pub taxi_out_s: f64,
    pub taxi_in_s: f64,
}

impl LtoTimes {
    /// ICAO standard times, idle split evenly between taxi-out and taxi-in.
    pub fn icao_standard() -> Self {
        Self::with_idle_s(DEFAULT_IDLE_S)
    }

    /// Standard take-off, climb-out and approach times with the given total
    /// idle time split evenly.
    pub fn with_idle_s(idle_s: f64) -> Self {
        LtoTimes {
            takeoff_s: TAKEOFF_S,
            climbout_s: CLIMBOUT_S,
            approach_s: APPROACH_S,
            taxi_out_s: idle_s / 2.0,
            taxi_in_s: idle_s / 2.0,
        }
    }

    /// Actual taxi times when both are known, otherwise the ICAO default.
    pub fn from_taxi_minutes(taxi_in_min: Option<f64>, taxi_out_min: Option<f64>) -> Self {
        match (taxi_in_min, taxi_out_min) {
            (Some(taxi_in), Some(taxi_out)) => LtoTimes {
                taxi_out_s: taxi_out * 60.0,
                taxi_in_s: taxi_in * 60.0,
                ..Self::icao_standard()
            },
            _ => Self::icao_standard(),
        }
    }

    pub fn idle_s(&self) -> f64 {
        self.taxi_out_s + self.taxi_in_s
    }

    pub fn is_valid(&self) -> bool {
        [
            self.takeoff_s,
            self.climbout_s,
            self.approach_s,
            self.taxi_out_s,
            self.taxi_in_s,
        ]
        .iter()
        .all(|t| t.is_finite() && *t >= 0.0)
    }
}

impl Default for LtoTimes {
    fn default() -> Self {
        Self::icao_standard()
    }
}

/// Per-mode LTO masses, already scaled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LtoBreakdown {
    pub takeoff: GasVector,
    pub climbout: GasVector,
    pub approach: GasVector,
    pub idle_out: GasVector,
    pub idle_in: GasVector,
}

impl LtoBreakdown {
    /// Mass emitted at the departure airport: take-off, climb-out, taxi-out.
    pub fn origin(&self) -> GasVector {
        self.takeoff + self.climbout + self.idle_out
    }

    /// Mass emitted at the arrival airport: approach and taxi-in.
    pub fn destination(&self) -> GasVector {
        self.approach + self.idle_in
    }

    /// Whole-cycle mass. Defined as `origin() + destination()` so the
    /// airport split reproduces it exactly.
    pub fn total(&self) -> GasVector {
        self.origin() + self.destination()
    }
}

/// Per-mode LTO masses for one aircraft movement.
///
/// Each mode contributes `rate × time × scale`; `scale` is the engine
/// multiplier times any family-fallback efficiency factor.
pub fn lto_breakdown(factors: &EngineLtoFactors, times: &LtoTimes, scale: f64) -> LtoBreakdown {
    let mass = |mode: Mode, seconds: f64| factors.rates(mode).map(|r| r * seconds * scale);
    LtoBreakdown {
        takeoff: mass(Mode::Takeoff, times.takeoff_s),
        climbout: mass(Mode::Climbout, times.climbout_s),
        approach: mass(Mode::Approach, times.approach_s),
        idle_out: mass(Mode::Idle, times.taxi_out_s),
        idle_in: mass(Mode::Idle, times.taxi_in_s),
    }
}

/// LTO cycle mass per gas: the sum over the four modes of rate × time,
/// scaled by `engine_multiplier`.
///
/// ```
/// use aeroemit::emissions::{lto_emissions, EngineLtoFactors, LtoTimes};
/// use aeroemit::GasVector;
///
/// let rate = GasVector::new(0.0, 1.0, 0.0, 0.0);
/// let engine = EngineLtoFactors::new("TEST", [rate; 4]);
/// let lto = lto_emissions(&engine, &LtoTimes::icao_standard(), 1.0);
/// assert_eq!(lto.co2(), 42.0 + 132.0 + 240.0 + 1560.0);
/// ```
pub fn lto_emissions(factors: &EngineLtoFactors, times: &LtoTimes, engine_multiplier: f64) -> GasVector {
    lto_breakdown(factors, times, engine_multiplier).total()
}
