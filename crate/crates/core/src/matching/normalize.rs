//! Collapsing the many spellings of an airframe type (`B737-800`,
//! `737/800`, `737-8NG`, ...) to one canonical name.

use std::collections::BTreeSet;
use std::io::Read;
use std::path::Path;

use regex::Regex;

use super::config_csv::{self, ConfigTableError};

const DEFAULT_RULES: &str = include_str!("../../defaults/normalization_rules.csv");

#[derive(Debug, Clone)]
struct Rule {
    pattern: String,
    regex: Regex,
    canonical_type: String,
}

/// Ordered `(pattern, canonical_type)` rules; the first matching rule wins.
///
/// Patterns are regular expressions matched against the whole trimmed,
/// uppercased designator.
#[derive(Debug, Clone)]
pub struct NormalizationRuleSet {
    rules: Vec<Rule>,
    canonical: BTreeSet<String>,
}

impl NormalizationRuleSet {
    pub fn new<P, C>(rules: impl IntoIterator<Item = (P, C)>) -> Result<Self, regex::Error>
    where
        P: Into<String>,
        C: Into<String>,
    {
        let rules = rules
            .into_iter()
            .map(|(p, c)| {
                let pattern = p.into();
                let regex = Regex::new(&format!("^(?:{pattern})$"))?;
                Ok(Rule {
                    pattern,
                    regex,
                    canonical_type: c.into().trim().to_uppercase(),
                })
            })
            .collect::<Result<Vec<_>, regex::Error>>()?;
        let canonical = rules.iter().map(|r| r.canonical_type.clone()).collect();
        Ok(NormalizationRuleSet { rules, canonical })
    }

    /// The rule set shipped with the crate.
    pub fn builtin() -> Self {
        Self::read(DEFAULT_RULES.as_bytes()).expect("built-in normalization rules are valid")
    }

    pub fn load(path: &Path) -> Result<Self, ConfigTableError> {
        Self::read(config_csv::open(path)?).map_err(|e| e.with_path(path))
    }

    /// Reads a `pattern,canonical_type` table.
    pub fn read<R: Read>(input: R) -> Result<Self, ConfigTableError> {
        let rows = config_csv::read(input, &["pattern", "canonical_type"])?;
        let mut pairs = Vec::with_capacity(rows.len());
        for (line, row) in rows {
            let invalid = |reason: String| ConfigTableError::Invalid { line, reason };
            let pattern = row[0].trim();
            let canonical = row[1].trim();
            if pattern.is_empty() || canonical.is_empty() {
                return Err(invalid("pattern and canonical_type must be non-empty".into()));
            }
            Regex::new(pattern).map_err(|e| invalid(format!("bad pattern {pattern:?}: {e}")))?;
            pairs.push((pattern.to_string(), canonical.to_string()));
        }
        Self::new(pairs).map_err(|e| ConfigTableError::Invalid {
            line: 0,
            reason: e.to_string(),
        })
    }

    /// Every canonical type named on the right-hand side.
    pub fn canonical_types(&self) -> &BTreeSet<String> {
        &self.canonical
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn patterns(&self) -> impl Iterator<Item = (&str, &str)> {
        self.rules
            .iter()
            .map(|r| (r.pattern.as_str(), r.canonical_type.as_str()))
    }
}

/// Canonical type for a raw designator, or `None` when no rule applies.
///
/// A designator that already is one of the rule set's canonical types maps
/// to itself, which makes normalization idempotent.
///
/// ```
/// use aeroemit::matching::{normalize_airframe_type, NormalizationRuleSet};
///
/// let rules = NormalizationRuleSet::builtin();
/// assert_eq!(normalize_airframe_type("737/800", &rules).as_deref(), Some("737-800"));
/// assert_eq!(normalize_airframe_type("B739ER", &rules).as_deref(), Some("737-900ER"));
/// ```
pub fn normalize_airframe_type(raw: &str, rules: &NormalizationRuleSet) -> Option<String> {
    let key = raw.trim().to_uppercase();
    if key.is_empty() {
        return None;
    }
    if rules.canonical.contains(&key) {
        return Some(key);
    }
    rules
        .rules
        .iter()
        .find(|r| r.regex.is_match(&key))
        .map(|r| r.canonical_type.clone())
}
