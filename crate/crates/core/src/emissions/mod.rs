//! Per-flight emissions: the LTO cycle from engine rates and mode times,
//! the CCD cycle from tabulated airframe profiles, and their CO₂-equivalent
//! sum.

mod ccd;
mod co2e;
mod flight;
mod lto;

pub use ccd::{
    ccd_interpolate, ccd_interpolate_by, CcdEstimate, CcdProfile, CcdTable, InterpolationKey, Knot,
    ProfileError, RangeFlag, NM_PER_STATUTE_MILE,
};
pub use co2e::{co2e, Co2eFactors};
pub use flight::{flight_emissions, EmissionOptions, EmissionsResult, EngineMultiplier};
pub use lto::{
    lto_breakdown, lto_emissions, EngineDatabank, EngineLtoFactors, LtoBreakdown, LtoTimes, Mode,
    APPROACH_S, CLIMBOUT_S, DEFAULT_IDLE_S, TAKEOFF_S,
};
