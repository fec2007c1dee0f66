//! Fallbacks for airframes without a CCD profile and tails without a
//! matched engine.

use std::collections::{BTreeMap, HashMap};
use std::io::Read;
use std::path::Path;

use super::config_csv::{self, ConfigTableError};
use super::EngineSource;

const DEFAULT_FAMILY_FALLBACK: &str = include_str!("../../defaults/family_fallback.csv");

/// Upper bound on a family-fallback efficiency factor.
pub const MAX_EFFICIENCY_FACTOR: f64 = 1.5;

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyFallback {
    pub surrogate_type: String,
    /// Multiplier applied to the surrogate's emissions, in `(0, 1.5]`.
    pub efficiency_factor: f64,
}

/// Airframe types lacking a CCD profile, mapped to the closest family
/// member that has one.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FamilyFallbackTable {
    entries: BTreeMap<String, FamilyFallback>,
}

impl FamilyFallbackTable {
    /// 737-8, 737-9, A320NEO, A330-900 and A220 onto 737-800, 737-900,
    /// A320-200, A330-300 and A320-200, each at 0.85.
    pub fn builtin() -> Self {
        Self::read(DEFAULT_FAMILY_FALLBACK.as_bytes()).expect("built-in family fallback table is valid")
    }

    pub fn load(path: &Path) -> Result<Self, ConfigTableError> {
        Self::read(config_csv::open(path)?).map_err(|e| e.with_path(path))
    }

    pub fn read<R: Read>(input: R) -> Result<Self, ConfigTableError> {
        let mut table = FamilyFallbackTable::default();
        for (line, row) in config_csv::read(input, &["missing_type", "surrogate_type", "efficiency_factor"])? {
            let invalid = |reason: String| ConfigTableError::Invalid { line, reason };
            let missing = row[0].trim().to_uppercase();
            let surrogate = row[1].trim().to_uppercase();
            if missing.is_empty() || surrogate.is_empty() {
                return Err(invalid("missing_type and surrogate_type must be non-empty".into()));
            }
            let factor: f64 = row[2]
                .trim()
                .parse()
                .map_err(|_| invalid(format!("efficiency_factor {:?} is not a number", &row[2])))?;
            table
                .insert(missing, surrogate, factor)
                .map_err(invalid)?;
        }
        Ok(table)
    }

    pub fn insert(
        &mut self,
        missing_type: impl Into<String>,
        surrogate_type: impl Into<String>,
        efficiency_factor: f64,
    ) -> Result<(), String> {
        let missing_type = missing_type.into();
        if !(efficiency_factor > 0.0 && efficiency_factor <= MAX_EFFICIENCY_FACTOR) {
            return Err(format!(
                "efficiency_factor for {missing_type} must be in (0, {MAX_EFFICIENCY_FACTOR}], got {efficiency_factor}"
            ));
        }
        if self.entries.contains_key(&missing_type) {
            return Err(format!("duplicate missing_type {missing_type}"));
        }
        self.entries.insert(
            missing_type,
            FamilyFallback {
                surrogate_type: surrogate_type.into(),
                efficiency_factor,
            },
        );
        Ok(())
    }

    pub fn get(&self, missing_type: &str) -> Option<&FamilyFallback> {
        self.entries.get(missing_type)
    }

    pub fn contains(&self, missing_type: &str) -> bool {
        self.entries.contains_key(missing_type)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &FamilyFallback)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }
}

/// Canonical airframe type to its most common engine.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PopularEngineTable {
    entries: BTreeMap<String, String>,
}

impl PopularEngineTable {
    /// Reads a `canonical_type,engine_uid` override table.
    pub fn read<R: Read>(input: R) -> Result<Self, ConfigTableError> {
        let mut entries = BTreeMap::new();
        for (line, row) in config_csv::read(input, &["canonical_type", "engine_uid"])? {
            let ty = row[0].trim().to_uppercase();
            let uid = row[1].trim().to_string();
            if ty.is_empty() || uid.is_empty() {
                return Err(ConfigTableError::Invalid {
                    line,
                    reason: "canonical_type and engine_uid must be non-empty".into(),
                });
            }
            if entries.insert(ty.clone(), uid).is_some() {
                return Err(ConfigTableError::Invalid {
                    line,
                    reason: format!("duplicate canonical_type {ty}"),
                });
            }
        }
        Ok(PopularEngineTable { entries })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigTableError> {
        Self::read(config_csv::open(path)?).map_err(|e| e.with_path(path))
    }

    pub fn get(&self, canonical_type: &str) -> Option<&str> {
        self.entries.get(canonical_type).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Entries of `overrides` replace or extend this table.
    pub fn overlay(&mut self, overrides: &PopularEngineTable) {
        for (k, v) in &overrides.entries {
            self.entries.insert(k.clone(), v.clone());
        }
    }
}

impl FromIterator<(String, String)> for PopularEngineTable {
    fn from_iter<I: IntoIterator<Item = (String, String)>>(iter: I) -> Self {
        PopularEngineTable {
            entries: iter.into_iter().collect(),
        }
    }
}

/// One tail's matched airframe type and engine, as fed to
/// [`build_popular_engine_table`].
#[derive(Debug, Clone, Copy)]
pub struct FleetEntry<'a> {
    pub canonical_type: &'a str,
    pub engine_uid: &'a str,
    pub source: EngineSource,
}

/// Per airframe type, the engine carried by the most tails. Only exact and
/// Jaccard matches count; ties go to the lexicographically smallest UID.
pub fn build_popular_engine_table<'a>(fleet: impl IntoIterator<Item = FleetEntry<'a>>) -> PopularEngineTable {
    let mut counts: HashMap<&str, HashMap<&str, usize>> = HashMap::new();
    for entry in fleet {
        if matches!(entry.source, EngineSource::Exact | EngineSource::Jaccard) {
            *counts
                .entry(entry.canonical_type)
                .or_default()
                .entry(entry.engine_uid)
                .or_default() += 1;
        }
    }
    counts
        .into_iter()
        .map(|(ty, engines)| {
            let (uid, _) = engines
                .into_iter()
                .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(a.0)))
                .expect("non-empty by construction");
            (ty.to_string(), uid.to_string())
        })
        .collect()
}
