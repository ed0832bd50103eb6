//! Embedded reference models.

use crate::dsl::parse_model;
use crate::model::{FeatureModel, FeaturePath, ModelStats};

pub const LTE_ADVANCED_SOURCE: &str = include_str!("../corpus/lte_advanced.fm");
pub const STUB_LEGACY_SOURCE: &str = include_str!("../corpus/stub_legacy.fm");
/// Tab-separated `path`, `full_name`, `description`, one row per feature.
pub const LTE_ADVANCED_MANIFEST: &str = include_str!("../corpus/transcription_manifest.tsv");

/// Leaf names the stub shares with LTE-Advanced.
pub const STUB_REUSED_NAMES: [&str; 3] = ["Authentication", "HSS", "MME"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub id: &'static str,
    pub source: &'static str,
    pub expected_stats: ModelStats,
}

pub const CORPUS: [CorpusEntry; 2] = [
    CorpusEntry {
        id: "lte-advanced",
        source: LTE_ADVANCED_SOURCE,
        expected_stats: ModelStats {
            feature_count: 59,
            max_depth: 5,
            and_groups: 15,
            alternative_groups: 2,
            or_groups: 0,
            mandatory: 43,
            optional: 11,
            alternative_members: 4,
            or_members: 0,
            constraint_count: 2,
        },
    },
    CorpusEntry {
        id: "stub-legacy",
        source: STUB_LEGACY_SOURCE,
        expected_stats: ModelStats {
            feature_count: 11,
            max_depth: 3,
            and_groups: 3,
            alternative_groups: 1,
            or_groups: 0,
            mandatory: 5,
            optional: 3,
            alternative_members: 2,
            or_members: 0,
            constraint_count: 0,
        },
    },
];

pub fn corpus_entry(id: &str) -> Option<&'static CorpusEntry> {
    CORPUS.iter().find(|e| e.id == id)
}

pub fn corpus_ids() -> impl Iterator<Item = &'static str> {
    CORPUS.iter().map(|e| e.id)
}

pub fn corpus_source(id: &str) -> Option<&'static str> {
    corpus_entry(id).map(|e| e.source)
}

pub fn corpus_model(id: &str) -> Option<FeatureModel> {
    corpus_source(id).map(|src| parse_model(src).expect("embedded corpus model parses"))
}

pub fn lte_advanced_model() -> FeatureModel {
    parse_model(LTE_ADVANCED_SOURCE).expect("embedded corpus model parses")
}

pub fn stub_legacy_model() -> FeatureModel {
    parse_model(STUB_LEGACY_SOURCE).expect("embedded corpus model parses")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestRow {
    pub path: FeaturePath,
    pub full_name: String,
    pub description: String,
}

pub fn manifest_rows() -> Vec<ManifestRow> {
    LTE_ADVANCED_MANIFEST
        .lines()
        .skip(1)
        .filter(|l| !l.is_empty())
        .map(|line| {
            let mut cells = line.splitn(3, '\t');
            let mut next = || cells.next().unwrap_or("").to_string();
            ManifestRow {
                path: FeaturePath::new(next()),
                full_name: next(),
                description: next(),
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AuditFinding {
    MissingFeature(FeaturePath),
    FullNameMismatch {
        path: FeaturePath,
        expected: String,
        found: Option<String>,
    },
    DescriptionMismatch {
        path: FeaturePath,
        expected: String,
        found: Option<String>,
    },
}

/// Differences between the embedded LTE-Advanced model's annotations and
/// its transcription manifest. Empty manifest cells are not checked.
pub fn corpus_annotation_audit() -> Vec<AuditFinding> {
    audit_against_manifest(&lte_advanced_model(), &manifest_rows())
}

pub fn audit_against_manifest(model: &FeatureModel, rows: &[ManifestRow]) -> Vec<AuditFinding> {
    let mut out = Vec::new();
    for row in rows {
        let Some(f) = model.by_path(row.path.as_str()) else {
            out.push(AuditFinding::MissingFeature(row.path.clone()));
            continue;
        };
        let ann = &f.annotations;
        if !row.full_name.is_empty() && ann.full_name.as_deref() != Some(row.full_name.as_str()) {
            out.push(AuditFinding::FullNameMismatch {
                path: row.path.clone(),
                expected: row.full_name.clone(),
                found: ann.full_name.clone(),
            });
        }
        if !row.description.is_empty()
            && ann.description.as_deref() != Some(row.description.as_str())
        {
            out.push(AuditFinding::DescriptionMismatch {
                path: row.path.clone(),
                expected: row.description.clone(),
                found: ann.description.clone(),
            });
        }
    }
    out
}
