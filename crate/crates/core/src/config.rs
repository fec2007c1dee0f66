//! The run configuration file.
//!
//! A flat TOML key-value file. Relative paths are resolved against the
//! directory holding the file.
//!
//! ```toml
//! ontime = "ontime.csv"
//! b43 = "b43.csv"
//! tail_registry = "tail_registry.csv"
//! engine_codes = "engine_codes.csv"
//! icao_engines = "icao_engines.csv"
//! bada_ccd = "bada_ccd.csv"
//! output_dir = "out"
//!
//! # optional
//! normalization_rules = "normalization_rules.csv"
//! family_fallback = "family_fallback.csv"
//! popular_engine_override = "popular_engine_override.csv"
//! jaccard_threshold = 0.5
//! engine_multiplier = "paper-compatible"   # or "per-engine"
//! interpolation_key = "time"               # or "distance"
//! co2e_co2 = 1.0
//! co2e_co = 1.57
//! co2e_hc = 84.0
//! co2e_nox = 298.0
//! unep_short_haul_co2_per_seat_mile = 0.15
//! unep_long_haul_co2_per_seat_mile = 0.11
//! unep_cutoff_mi = 500.0
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::aggregate::UnepBaseline;
use crate::emissions::{Co2eFactors, EmissionOptions, EngineMultiplier, InterpolationKey};
use crate::matching::DEFAULT_THRESHOLD;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config {}: {source}", path.display())]
    Parse {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },
    #[error("config key `{key}`: {reason}")]
    Invalid { key: &'static str, reason: String },
    #[error("config key `{key}`: input file {} does not exist", path.display())]
    MissingInput { key: &'static str, path: PathBuf },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    ontime: PathBuf,
    b43: PathBuf,
    tail_registry: PathBuf,
    engine_codes: PathBuf,
    icao_engines: PathBuf,
    bada_ccd: PathBuf,
    output_dir: PathBuf,
    normalization_rules: Option<PathBuf>,
    family_fallback: Option<PathBuf>,
    popular_engine_override: Option<PathBuf>,
    jaccard_threshold: Option<f64>,
    engine_multiplier: Option<String>,
    interpolation_key: Option<String>,
    co2e_co2: Option<f64>,
    co2e_co: Option<f64>,
    co2e_hc: Option<f64>,
    co2e_nox: Option<f64>,
    unep_short_haul_co2_per_seat_mile: Option<f64>,
    unep_long_haul_co2_per_seat_mile: Option<f64>,
    unep_cutoff_mi: Option<f64>,
}

/// Paths of the six input tables.
#[derive(Debug, Clone, PartialEq)]
pub struct InputPaths {
    pub ontime: PathBuf,
    pub b43: PathBuf,
    pub tail_registry: PathBuf,
    pub engine_codes: PathBuf,
    pub icao_engines: PathBuf,
    pub bada_ccd: PathBuf,
}

/// Everything a run needs. Optional matching tables fall back to the
/// built-in defaults when absent.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub inputs: InputPaths,
    pub normalization_rules: Option<PathBuf>,
    pub family_fallback: Option<PathBuf>,
    pub popular_engine_override: Option<PathBuf>,
    pub factors: Co2eFactors,
    pub jaccard_threshold: f64,
    pub engine_multiplier: EngineMultiplier,
    pub interpolation_key: InterpolationKey,
    pub output_dir: PathBuf,
    pub unep: Option<UnepBaseline>,
}

impl RunConfig {
    /// Reads and validates a config file.
    pub fn load(path: &Path) -> Result<RunConfig, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new(""));
        Self::from_toml(&text, base).map_err(|e| match e {
            ConfigError::Parse { source, .. } => ConfigError::Parse {
                path: path.to_path_buf(),
                source,
            },
            e => e,
        })
    }

    /// Parses config text, resolving relative paths against `base`.
    pub fn from_toml(text: &str, base: &Path) -> Result<RunConfig, ConfigError> {
        let raw: RawConfig = toml::from_str(text).map_err(|source| ConfigError::Parse {
            path: PathBuf::new(),
            source,
        })?;
        let at = |p: PathBuf| if p.is_absolute() { p } else { base.join(p) };

        let defaults = Co2eFactors::default();
        let factors = Co2eFactors {
            co2: raw.co2e_co2.unwrap_or(defaults.co2),
            co: raw.co2e_co.unwrap_or(defaults.co),
            hc: raw.co2e_hc.unwrap_or(defaults.hc),
            nox: raw.co2e_nox.unwrap_or(defaults.nox),
        };
        let unep = match (
            raw.unep_short_haul_co2_per_seat_mile,
            raw.unep_long_haul_co2_per_seat_mile,
            raw.unep_cutoff_mi,
        ) {
            (None, None, None) => None,
            (Some(short), Some(long), Some(cutoff)) => Some(UnepBaseline {
                short_haul_co2_per_seat_mile: short,
                long_haul_co2_per_seat_mile: long,
                cutoff_mi: cutoff,
            }),
            _ => {
                return Err(ConfigError::Invalid {
                    key: "unep_cutoff_mi",
                    reason: "the three unep_* keys must be given together".into(),
                })
            }
        };
        let config = RunConfig {
            inputs: InputPaths {
                ontime: at(raw.ontime),
                b43: at(raw.b43),
                tail_registry: at(raw.tail_registry),
                engine_codes: at(raw.engine_codes),
                icao_engines: at(raw.icao_engines),
                bada_ccd: at(raw.bada_ccd),
            },
            normalization_rules: raw.normalization_rules.map(at),
            family_fallback: raw.family_fallback.map(at),
            popular_engine_override: raw.popular_engine_override.map(at),
            factors,
            jaccard_threshold: raw.jaccard_threshold.unwrap_or(DEFAULT_THRESHOLD),
            engine_multiplier: parse_opt("engine_multiplier", raw.engine_multiplier)?,
            interpolation_key: parse_opt("interpolation_key", raw.interpolation_key)?,
            output_dir: at(raw.output_dir),
            unep,
        };
        config.validate()?;
        Ok(config)
    }

    /// Numeric ranges and existence of every referenced input.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(0.0..=1.0).contains(&self.jaccard_threshold) {
            return Err(ConfigError::Invalid {
                key: "jaccard_threshold",
                reason: format!("must be within [0, 1], got {}", self.jaccard_threshold),
            });
        }
        self.factors
            .validate()
            .map_err(|reason| ConfigError::Invalid { key: "co2e_*", reason })?;
        if let Some(u) = &self.unep {
            let values = [
                u.short_haul_co2_per_seat_mile,
                u.long_haul_co2_per_seat_mile,
                u.cutoff_mi,
            ];
            if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(ConfigError::Invalid {
                    key: "unep_*",
                    reason: "baseline constants must be finite and non-negative".into(),
                });
            }
        }
        for (key, path) in self.input_files() {
            if !path.is_file() {
                return Err(ConfigError::MissingInput {
                    key,
                    path: path.to_path_buf(),
                });
            }
        }
        Ok(())
    }

    /// Every file the run reads, with its config key.
    pub fn input_files(&self) -> Vec<(&'static str, &Path)> {
        let i = &self.inputs;
        let mut out: Vec<(&'static str, &Path)> = vec![
            ("ontime", &i.ontime),
            ("b43", &i.b43),
            ("tail_registry", &i.tail_registry),
            ("engine_codes", &i.engine_codes),
            ("icao_engines", &i.icao_engines),
            ("bada_ccd", &i.bada_ccd),
        ];
        out.extend(self.normalization_rules.as_deref().map(|p| ("normalization_rules", p)));
        out.extend(self.family_fallback.as_deref().map(|p| ("family_fallback", p)));
        out.extend(
            self.popular_engine_override
                .as_deref()
                .map(|p| ("popular_engine_override", p)),
        );
        out
    }

    pub fn emission_options(&self) -> EmissionOptions {
        EmissionOptions {
            factors: self.factors,
            engine_multiplier: self.engine_multiplier,
            interpolation_key: self.interpolation_key,
        }
    }
}

fn parse_opt<T>(key: &'static str, value: Option<String>) -> Result<T, ConfigError>
where
    T: std::str::FromStr<Err = String> + Default,
{
    value
        .map(|v| v.parse().map_err(|reason| ConfigError::Invalid { key, reason }))
        .transpose()
        .map(Option::unwrap_or_default)
}
