//! Cruise, climb and descent cycle: tabulated per-airframe profiles and
//! two-point linear interpolation between knots.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::gas::{Gas, GasVector};

/// Statute miles to nautical miles.
pub const NM_PER_STATUTE_MILE: f64 = 1609.344 / 1852.0;

/// One tabulated case of a CCD profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Knot {
    pub duration_min: f64,
    /// Present only when the profile table carries a distance column.
    pub distance_nm: Option<f64>,
    pub emissions: GasVector,
}

impl Knot {
    pub fn new(duration_min: f64, emissions: GasVector) -> Self {
        Knot {
            duration_min,
            distance_nm: None,
            emissions,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("profile has {0} knot(s); at least 2 are required")]
    TooFewKnots(usize),
    #[error("duplicate knot duration {0} min")]
    DuplicateDuration(f64),
    #[error("knot duration {0} is not a positive finite number")]
    InvalidDuration(f64),
    #[error("negative or non-finite emission mass at duration {0} min")]
    InvalidMass(f64),
    #[error("knot distances must be all present or all absent, and strictly increasing with duration")]
    InconsistentDistances,
    #[error("profile has no distance column to interpolate on")]
    NoDistanceAxis,
}

/// Which abscissa the profile is interpolated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InterpolationKey {
    /// Knots keyed by flight duration in minutes, queried with air time.
    #[default]
    Time,
    /// Knots keyed by distance in nautical miles, queried with the flight's
    /// great-circle distance.
    Distance,
}

impl FromStr for InterpolationKey {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "time" => Ok(InterpolationKey::Time),
            "distance" => Ok(InterpolationKey::Distance),
            other => Err(format!("unknown interpolation key {other:?} (expected time or distance)")),
        }
    }
}

/// Emissions tabulated for one airframe type, knots sorted by duration.
#[derive(Debug, Clone, PartialEq)]
pub struct CcdProfile {
    pub canonical_type: String,
    knots: Vec<Knot>,
}

impl CcdProfile {
    /// Sorts `knots` by duration and checks the profile invariants.
    pub fn new(canonical_type: impl Into<String>, mut knots: Vec<Knot>) -> Result<Self, ProfileError> {
        if knots.len() < 2 {
            return Err(ProfileError::TooFewKnots(knots.len()));
        }
        for k in &knots {
            if !(k.duration_min.is_finite() && k.duration_min > 0.0) {
                return Err(ProfileError::InvalidDuration(k.duration_min));
            }
            if !(k.emissions.is_finite() && k.emissions.is_non_negative()) {
                return Err(ProfileError::InvalidMass(k.duration_min));
            }
        }
        knots.sort_by(|a, b| a.duration_min.total_cmp(&b.duration_min));
        if let Some(w) = knots.windows(2).find(|w| w[0].duration_min == w[1].duration_min) {
            return Err(ProfileError::DuplicateDuration(w[0].duration_min));
        }
        let with_distance = knots.iter().filter(|k| k.distance_nm.is_some()).count();
        if with_distance != 0 {
            let increasing = knots.windows(2).all(|w| match (w[0].distance_nm, w[1].distance_nm) {
                (Some(a), Some(b)) => a.is_finite() && b.is_finite() && a < b,
                _ => false,
            });
            if with_distance != knots.len() || !increasing {
                return Err(ProfileError::InconsistentDistances);
            }
        }
        Ok(CcdProfile {
            canonical_type: canonical_type.into(),
            knots,
        })
    }

    pub fn knots(&self) -> &[Knot] {
        &self.knots
    }

    pub fn has_distance_axis(&self) -> bool {
        self.knots[0].distance_nm.is_some()
    }

    fn axis(&self, key: InterpolationKey) -> Option<Vec<f64>> {
        match key {
            InterpolationKey::Time => Some(self.knots.iter().map(|k| k.duration_min).collect()),
            InterpolationKey::Distance => self.knots.iter().map(|k| k.distance_nm).collect(),
        }
    }
}

/// All CCD profiles keyed by canonical airframe type.
#[derive(Debug, Clone, Default)]
pub struct CcdTable {
    profiles: BTreeMap<String, CcdProfile>,
}

impl CcdTable {
    pub fn get(&self, canonical_type: &str) -> Option<&CcdProfile> {
        self.profiles.get(canonical_type)
    }

    pub fn contains(&self, canonical_type: &str) -> bool {
        self.profiles.contains_key(canonical_type)
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &CcdProfile> {
        self.profiles.values()
    }
}

impl FromIterator<CcdProfile> for CcdTable {
    fn from_iter<I: IntoIterator<Item = CcdProfile>>(iter: I) -> Self {
        CcdTable {
            profiles: iter
                .into_iter()
                .map(|p| (p.canonical_type.clone(), p))
                .collect(),
        }
    }
}

/// Where a query fell relative to the tabulated range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RangeFlag {
    #[default]
    Within,
    ExtrapolatedLow,
    ExtrapolatedHigh,
}

impl RangeFlag {
    pub fn as_flag(self) -> Option<&'static str> {
        match self {
            RangeFlag::Within => None,
            RangeFlag::ExtrapolatedLow => Some("EXTRAPOLATED_LOW"),
            RangeFlag::ExtrapolatedHigh => Some("EXTRAPOLATED_HIGH"),
        }
    }
}

impl fmt::Display for RangeFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_flag().unwrap_or("WITHIN"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CcdEstimate {
    pub emissions: GasVector,
    pub range: RangeFlag,
}

/// CCD mass per gas at `duration_min`, scaled by `efficiency_factor`.
///
/// Between knots this is two-point linear interpolation; at a knot it
/// returns the tabulated value exactly. Outside the table the end segment
/// is extended and the result flagged.
pub fn ccd_interpolate(profile: &CcdProfile, duration_min: f64, efficiency_factor: f64) -> CcdEstimate {
    interpolate_on(
        profile,
        &profile.axis(InterpolationKey::Time).expect("duration axis always present"),
        duration_min,
        efficiency_factor,
    )
}

/// As [`ccd_interpolate`], on the chosen abscissa. `x` is minutes for
/// [`InterpolationKey::Time`] and nautical miles for
/// [`InterpolationKey::Distance`].
pub fn ccd_interpolate_by(
    profile: &CcdProfile,
    key: InterpolationKey,
    x: f64,
    efficiency_factor: f64,
) -> Result<CcdEstimate, ProfileError> {
    let axis = profile.axis(key).ok_or(ProfileError::NoDistanceAxis)?;
    Ok(interpolate_on(profile, &axis, x, efficiency_factor))
}

fn interpolate_on(profile: &CcdProfile, axis: &[f64], x: f64, efficiency_factor: f64) -> CcdEstimate {
    let knots = &profile.knots;
    let last = knots.len() - 1;
    let (lo, range) = match axis.binary_search_by(|k| k.total_cmp(&x)) {
        Ok(i) => {
            return CcdEstimate {
                emissions: knots[i].emissions * efficiency_factor,
                range: RangeFlag::Within,
            }
        }
        Err(0) => (0, RangeFlag::ExtrapolatedLow),
        Err(i) if i > last => (last - 1, RangeFlag::ExtrapolatedHigh),
        Err(i) => (i - 1, RangeFlag::Within),
    };
    let (x0, x1) = (axis[lo], axis[lo + 1]);
    let (y0, y1) = (knots[lo].emissions, knots[lo + 1].emissions);
    let w = (x - x0) / (x1 - x0);
    let emissions = GasVector::from_fn(|g: Gas| {
        let y = y0[g] + (y1[g] - y0[g]) * w;
        // Extending the first segment below the table can cross zero.
        if range == RangeFlag::ExtrapolatedLow {
            y.max(0.0)
        } else {
            y
        }
    });
    CcdEstimate {
        emissions: emissions * efficiency_factor,
        range,
    }
}
