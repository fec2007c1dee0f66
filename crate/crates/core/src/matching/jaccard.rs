//! Token-set Jaccard matching of FAA engine designations to ICAO engine UIDs.

use std::collections::BTreeSet;

use crate::emissions::EngineDatabank;

/// Default minimum similarity for an engine match.
pub const DEFAULT_THRESHOLD: f64 = 0.5;

pub type TokenSet = BTreeSet<String>;

/// Uppercase alphanumeric runs of `designation`, deduplicated.
///
/// ```
/// use aeroemit::matching::tokenize;
///
/// let t = tokenize("PW 4060-3");
/// assert_eq!(t.into_iter().collect::<Vec<_>>(), ["3", "4060", "PW"]);
/// ```
pub fn tokenize(designation: &str) -> TokenSet {
    designation
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_uppercase)
        .collect()
}

/// `|a ∩ b| / |a ∪ b|`, with two empty sets counted as identical.
pub fn jaccard_similarity(a: &TokenSet, b: &TokenSet) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    let shared = a.intersection(b).count();
    let union = a.len() + b.len() - shared;
    shared as f64 / union as f64
}

/// Result of matching one designation against the databank.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineMatch {
    pub engine_uid: String,
    pub score: f64,
    /// The designation equals the UID (ignoring case and surrounding space).
    pub exact: bool,
}

/// Pre-tokenized databank, in ascending UID order.
#[derive(Debug, Clone)]
pub struct EngineMatcher {
    entries: Vec<(String, TokenSet)>,
}

impl EngineMatcher {
    pub fn new(databank: &EngineDatabank) -> Self {
        EngineMatcher {
            entries: databank
                .iter()
                .map(|e| (e.engine_uid.clone(), tokenize(&e.engine_uid)))
                .collect(),
        }
    }

    /// Best-scoring UID, ties going to the lexicographically smallest;
    /// `None` when the best score is below `threshold`.
    pub fn best_match(&self, designation: &str, threshold: f64) -> Option<EngineMatch> {
        let wanted = designation.trim();
        if let Some((uid, _)) = self.entries.iter().find(|(uid, _)| uid.eq_ignore_ascii_case(wanted)) {
            return Some(EngineMatch {
                engine_uid: uid.clone(),
                score: 1.0,
                exact: true,
            });
        }
        let tokens = tokenize(wanted);
        let mut best: Option<(&str, f64)> = None;
        for (uid, candidate) in &self.entries {
            let score = jaccard_similarity(&tokens, candidate);
            if best.map_or(true, |(_, s)| score > s) {
                best = Some((uid, score));
            }
        }
        best.filter(|&(_, score)| score >= threshold)
            .map(|(uid, score)| EngineMatch {
                engine_uid: uid.to_string(),
                score,
                exact: false,
            })
    }
}

/// Matches one FAA designation against the whole databank.
pub fn match_engine(designation: &str, databank: &EngineDatabank, threshold: f64) -> Option<EngineMatch> {
    EngineMatcher::new(databank).best_match(designation, threshold)
}
