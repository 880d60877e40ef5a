//! The four judging criteria and their ordinal level vocabularies.
//!
//! Levels are ordered worst-to-best and indexed from 0 internally; display
//! numbering is 1-based. The registry is compiled in and never changes at
//! runtime.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// One of the four judging dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Professionalism,
    MedicalRelevance,
    EthicalBehavior,
    ContextualDistraction,
}

const PROFESSIONALISM_LEVELS: [&str; 3] = ["Unprofessional", "Borderline", "Appropriate"];
const MEDICAL_RELEVANCE_LEVELS: [&str; 3] = ["Irrelevant", "Partially relevant", "Relevant"];
const ETHICAL_BEHAVIOR_LEVELS: [&str; 5] =
    ["Dangerous", "Unsafe", "Questionable", "Mostly safe", "Safe"];
const CONTEXTUAL_DISTRACTION_LEVELS: [&str; 4] = [
    "Highly distracting",
    "Moderately distracting",
    "Questionable",
    "Not distracting",
];

impl Criterion {
    /// All criteria in their fixed registry order.
    pub const ALL: [Criterion; 4] = [
        Criterion::Professionalism,
        Criterion::MedicalRelevance,
        Criterion::EthicalBehavior,
        Criterion::ContextualDistraction,
    ];

    /// Position within the registry order (0..4).
    pub fn position(self) -> usize {
        match self {
            Criterion::Professionalism => 0,
            Criterion::MedicalRelevance => 1,
            Criterion::EthicalBehavior => 2,
            Criterion::ContextualDistraction => 3,
        }
    }

    /// Human-readable name, as used in prompts and annotation sheets.
    pub fn display_name(self) -> &'static str {
        match self {
            Criterion::Professionalism => "Professionalism",
            Criterion::MedicalRelevance => "Medical Relevance",
            Criterion::EthicalBehavior => "Ethical Behavior",
            Criterion::ContextualDistraction => "Contextual Distraction",
        }
    }

    /// Snake-case identifier, as used in config and file formats.
    pub fn key(self) -> &'static str {
        match self {
            Criterion::Professionalism => "professionalism",
            Criterion::MedicalRelevance => "medical_relevance",
            Criterion::EthicalBehavior => "ethical_behavior",
            Criterion::ContextualDistraction => "contextual_distraction",
        }
    }

    /// Level names in ascending order (worst first).
    pub fn level_names(self) -> &'static [&'static str] {
        match self {
            Criterion::Professionalism => &PROFESSIONALISM_LEVELS,
            Criterion::MedicalRelevance => &MEDICAL_RELEVANCE_LEVELS,
            Criterion::EthicalBehavior => &ETHICAL_BEHAVIOR_LEVELS,
            Criterion::ContextualDistraction => &CONTEXTUAL_DISTRACTION_LEVELS,
        }
    }

    pub fn level_count(self) -> usize {
        self.level_names().len()
    }

    /// Parse a snake-case key back into a criterion.
    pub fn from_key(key: &str) -> Option<Criterion> {
        Criterion::ALL.into_iter().find(|c| c.key() == key)
    }
}

impl std::fmt::Display for Criterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.display_name())
    }
}

/// A validated 0-based level within one criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LevelIndex {
    criterion: Criterion,
    index: usize,
}

impl LevelIndex {
    pub fn new(criterion: Criterion, index: usize) -> Result<Self, RubricError> {
        if index >= criterion.level_count() {
            return Err(RubricError::IndexOutOfRange { criterion, index });
        }
        Ok(LevelIndex { criterion, index })
    }

    pub fn criterion(self) -> Criterion {
        self.criterion
    }

    pub fn index(self) -> usize {
        self.index
    }

    pub fn name(self) -> &'static str {
        self.criterion.level_names()[self.index]
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RubricError {
    #[error("unknown label {label:?} for criterion {criterion}")]
    UnknownLabel { criterion: Criterion, label: String },
    #[error("level index {index} out of range for criterion {criterion}")]
    IndexOutOfRange { criterion: Criterion, index: usize },
}

/// Static description of one criterion, for the machine-readable rubric dump.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzyCriterion {
    pub id: Criterion,
    pub display_name: String,
    /// Level names, worst first. Display numbering is index + 1.
    pub levels: Vec<String>,
}

/// The four criteria with their level sets, in fixed order.
pub fn criteria_registry() -> Vec<FuzzyCriterion> {
    Criterion::ALL
        .into_iter()
        .map(|c| FuzzyCriterion {
            id: c,
            display_name: c.display_name().to_string(),
            levels: c.level_names().iter().map(|s| s.to_string()).collect(),
        })
        .collect()
}

/// Content hash of the registry. Checkpoints record it so a model trained
/// against one label vocabulary is never queried against another.
pub fn rubric_fingerprint() -> String {
    let canonical = serde_json::to_string(&criteria_registry()).expect("registry serializes");
    let digest = Sha256::digest(canonical.as_bytes());
    hex::encode(digest)
}

/// Resolve a label string to its level index.
///
/// Matching is case-insensitive and whitespace-trimmed; a leading ordinal
/// prefix such as `"3. "` (annotation sheets sometimes keep the display
/// numbering) is stripped first.
pub fn parse_level(criterion: Criterion, label: &str) -> Result<LevelIndex, RubricError> {
    let trimmed = label.trim();
    let stripped = strip_ordinal_prefix(trimmed);
    let needle = stripped.to_lowercase();
    for (i, name) in criterion.level_names().iter().enumerate() {
        if name.to_lowercase() == needle {
            return Ok(LevelIndex {
                criterion,
                index: i,
            });
        }
    }
    Err(RubricError::UnknownLabel {
        criterion,
        label: label.to_string(),
    })
}

/// Canonical level name for an index.
pub fn level_name(criterion: Criterion, index: usize) -> Result<&'static str, RubricError> {
    LevelIndex::new(criterion, index).map(LevelIndex::name)
}

fn strip_ordinal_prefix(label: &str) -> &str {
    let digits = label.chars().take_while(|c| c.is_ascii_digit()).count();
    if digits == 0 {
        return label;
    }
    let rest = &label[digits..];
    match rest.strip_prefix('.') {
        Some(tail) => tail.trim_start(),
        None => label,
    }
}

/// One gold or predicted level per criterion. Field order follows the
/// registry order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelSet {
    pub professionalism: usize,
    pub medical_relevance: usize,
    pub ethical_behavior: usize,
    pub contextual_distraction: usize,
}

impl LabelSet {
    pub fn new(levels: [usize; 4]) -> Result<Self, RubricError> {
        for (c, &ix) in Criterion::ALL.iter().zip(levels.iter()) {
            LevelIndex::new(*c, ix)?;
        }
        Ok(LabelSet {
            professionalism: levels[0],
            medical_relevance: levels[1],
            ethical_behavior: levels[2],
            contextual_distraction: levels[3],
        })
    }

    /// Build from per-criterion level names.
    pub fn from_names(names: [&str; 4]) -> Result<Self, RubricError> {
        let mut levels = [0usize; 4];
        for (slot, (c, name)) in levels.iter_mut().zip(Criterion::ALL.into_iter().zip(names)) {
            *slot = parse_level(c, name)?.index();
        }
        Self::new(levels)
    }

    pub fn get(&self, criterion: Criterion) -> usize {
        match criterion {
            Criterion::Professionalism => self.professionalism,
            Criterion::MedicalRelevance => self.medical_relevance,
            Criterion::EthicalBehavior => self.ethical_behavior,
            Criterion::ContextualDistraction => self.contextual_distraction,
        }
    }

    pub fn set(&mut self, criterion: Criterion, index: usize) {
        match criterion {
            Criterion::Professionalism => self.professionalism = index,
            Criterion::MedicalRelevance => self.medical_relevance = index,
            Criterion::EthicalBehavior => self.ethical_behavior = index,
            Criterion::ContextualDistraction => self.contextual_distraction = index,
        }
    }

    /// Verify every level is in range for its criterion.
    pub fn validate(&self) -> Result<(), RubricError> {
        for c in Criterion::ALL {
            LevelIndex::new(c, self.get(c))?;
        }
        Ok(())
    }

    pub fn level_name(&self, criterion: Criterion) -> &'static str {
        criterion.level_names()[self.get(criterion)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_has_expected_shape() {
        let registry = criteria_registry();
        assert_eq!(registry.len(), 4);
        let counts: Vec<usize> = registry.iter().map(|c| c.levels.len()).collect();
        assert_eq!(counts, vec![3, 3, 5, 4]);
        assert_eq!(
            registry[2].levels,
            vec!["Dangerous", "Unsafe", "Questionable", "Mostly safe", "Safe"]
        );
        assert_eq!(registry[3].display_name, "Contextual Distraction");
    }

    #[test]
    fn registry_is_pure() {
        assert_eq!(criteria_registry(), criteria_registry());
        assert_eq!(rubric_fingerprint(), rubric_fingerprint());
    }

    #[test]
    fn parse_level_known_fixtures() {
        let ix = parse_level(Criterion::ContextualDistraction, "Not distracting").unwrap();
        assert_eq!(ix.index(), 3);
        let ix = parse_level(Criterion::Professionalism, "  appropriate ").unwrap();
        assert_eq!(ix.index(), 2);
        let ix = parse_level(Criterion::MedicalRelevance, "2. Partially relevant").unwrap();
        assert_eq!(ix.index(), 1);
    }

    #[test]
    fn parse_level_rejects_unknown() {
        let err = parse_level(Criterion::EthicalBehavior, "totally fine").unwrap_err();
        assert!(matches!(err, RubricError::UnknownLabel { .. }));
    }

    #[test]
    fn level_name_fixtures() {
        assert_eq!(level_name(Criterion::EthicalBehavior, 4).unwrap(), "Safe");
        assert_eq!(
            level_name(Criterion::Professionalism, 0).unwrap(),
            "Unprofessional"
        );
        assert_eq!(
            level_name(Criterion::ContextualDistraction, 0).unwrap(),
            "Highly distracting"
        );
        assert!(matches!(
            level_name(Criterion::MedicalRelevance, 3),
            Err(RubricError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn parse_and_name_round_trip_all_levels() {
        for c in Criterion::ALL {
            for i in 0..c.level_count() {
                let name = level_name(c, i).unwrap();
                assert_eq!(parse_level(c, name).unwrap().index(), i);
                // casing and whitespace do not matter
                let mangled = format!("  {}  ", name.to_uppercase());
                assert_eq!(parse_level(c, &mangled).unwrap().index(), i);
                // neither does the 1-based display prefix
                let prefixed = format!("{}. {}", i + 1, name);
                assert_eq!(parse_level(c, &prefixed).unwrap().index(), i);
            }
        }
    }

    #[test]
    fn label_set_accessors_match_fields() {
        let labels = LabelSet::new([2, 2, 4, 3]).unwrap();
        assert_eq!(labels.get(Criterion::EthicalBehavior), 4);
        assert_eq!(labels.level_name(Criterion::EthicalBehavior), "Safe");
        assert!(LabelSet::new([3, 0, 0, 0]).is_err());
    }

    #[test]
    fn label_set_from_names() {
        let labels =
            LabelSet::from_names(["Appropriate", "Relevant", "Safe", "Not distracting"]).unwrap();
        assert_eq!(labels, LabelSet::new([2, 2, 4, 3]).unwrap());
    }
}
