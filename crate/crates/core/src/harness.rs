//! Compares extracted relations against committed ground-truth oracles
//! and computes precision/recall. Matching is by qualified names, kind,
//! and language pair; weights are ignored (existence check).

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{EntityTree, RelationKind, RelationStore, SourceLanguage};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq, Hash)]
#[serde(rename_all = "camelCase")]
pub struct TruthRecord {
    pub source_qualified_name: String,
    pub target_qualified_name: String,
    pub kind: RelationKind,
    pub language_pair: (String, String),
}

#[derive(Debug, Clone)]
pub struct GroundTruth {
    pub records: Vec<TruthRecord>,
}

#[derive(Debug, Error)]
pub enum TruthError {
    #[error("failed to read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid ground truth JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("duplicate ground-truth record: {0:?}")]
    Duplicate(Box<TruthRecord>),
}

impl GroundTruth {
    pub fn from_records(records: Vec<TruthRecord>) -> Result<Self, TruthError> {
        let mut seen = HashSet::new();
        for record in &records {
            if !seen.insert(record.clone()) {
                return Err(TruthError::Duplicate(Box::new(record.clone())));
            }
        }
        Ok(GroundTruth { records })
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, TruthError> {
        let records: Vec<TruthRecord> = serde_json::from_slice(bytes)?;
        Self::from_records(records)
    }

    pub fn load(path: &Path) -> Result<Self, TruthError> {
        let bytes = std::fs::read(path).map_err(|source| TruthError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&bytes)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

#[derive(Debug, Clone, Default, Serialize, PartialEq)]
#[serde(rename_all = "camelCase")]
pub struct Counts {
    pub found: usize,
    pub not_found: usize,
    pub missed: usize,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
}

impl Counts {
    fn finish(&mut self) {
        self.precision = ratio(self.found, self.found + self.not_found);
        self.recall = ratio(self.found, self.found + self.missed);
    }
}

fn ratio(numerator: usize, denominator: usize) -> Option<f64> {
    if denominator == 0 {
        None
    } else {
        Some(numerator as f64 / denominator as f64)
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
#[serde(rename_all = "camelCase")]
pub struct AccuracyReport {
    pub found: usize,
    pub not_found: usize,
    pub missed: usize,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub per_kind: BTreeMap<String, Counts>,
    pub per_language_pair: BTreeMap<String, Counts>,
}

impl AccuracyReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

type MatchKey = (String, String, RelationKind, (String, String));

fn pair_strings(pair: (SourceLanguage, SourceLanguage)) -> (String, String) {
    (pair.0.to_string(), pair.1.to_string())
}

/// Labels each extracted relation Found or NotFound against the truth
/// and counts unmatched truth records as Missed. A synthetic accessor
/// target matches a truth record naming either the accessor or its
/// underlying property.
pub fn compare(store: &RelationStore, tree: &EntityTree, truth: &GroundTruth) -> AccuracyReport {
    // De-duplicate extracted relations by the matching key.
    let mut extracted: Vec<(MatchKey, Option<MatchKey>)> = Vec::new();
    let mut seen = HashSet::new();
    for relation in store.iter() {
        let source_qn = tree.entity(relation.source).qualified_name.clone();
        let target = tree.entity(relation.target);
        let pair = pair_strings(relation.language_pair);
        let key: MatchKey = (
            source_qn.clone(),
            target.qualified_name.clone(),
            relation.kind,
            pair.clone(),
        );
        if !seen.insert(key.clone()) {
            continue;
        }
        let alias = tree.accessor_property(relation.target).map(|property| {
            (
                source_qn,
                tree.entity(property).qualified_name.clone(),
                relation.kind,
                pair,
            )
        });
        extracted.push((key, alias));
    }

    let mut consumed: HashMap<MatchKey, bool> = truth
        .records
        .iter()
        .map(|r| {
            (
                (
                    r.source_qualified_name.clone(),
                    r.target_qualified_name.clone(),
                    r.kind,
                    r.language_pair.clone(),
                ),
                false,
            )
        })
        .collect();

    let mut report = AccuracyReport {
        found: 0,
        not_found: 0,
        missed: 0,
        precision: None,
        recall: None,
        per_kind: BTreeMap::new(),
        per_language_pair: BTreeMap::new(),
    };

    let tally =
        |report: &mut AccuracyReport, kind: RelationKind, pair: &(String, String), slot: usize| {
            let kind_counts = report
                .per_kind
                .entry(kind.as_str().to_string())
                .or_default();
            let pair_counts = report
                .per_language_pair
                .entry(format!("{}->{}", pair.0, pair.1))
                .or_default();
            for counts in [kind_counts, pair_counts] {
                match slot {
                    0 => counts.found += 1,
                    1 => counts.not_found += 1,
                    _ => counts.missed += 1,
                }
            }
        };

    for (key, alias) in &extracted {
        let hit = if matches!(consumed.get(key), Some(false)) {
            Some(key.clone())
        } else {
            alias
                .as_ref()
                .filter(|a| matches!(consumed.get(*a), Some(false)))
                .cloned()
        };
        match hit {
            Some(matched) => {
                consumed.insert(matched, true);
                report.found += 1;
                tally(&mut report, key.2, &key.3, 0);
            }
            None => {
                report.not_found += 1;
                tally(&mut report, key.2, &key.3, 1);
            }
        }
    }

    for record in &truth.records {
        let key: MatchKey = (
            record.source_qualified_name.clone(),
            record.target_qualified_name.clone(),
            record.kind,
            record.language_pair.clone(),
        );
        if !consumed.get(&key).copied().unwrap_or(false) {
            report.missed += 1;
            tally(&mut report, record.kind, &record.language_pair, 2);
        }
    }

    report.precision = ratio(report.found, report.found + report.not_found);
    report.recall = ratio(report.found, report.found + report.missed);
    for counts in report.per_kind.values_mut() {
        counts.finish();
    }
    for counts in report.per_language_pair.values_mut() {
        counts.finish();
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{EntityKind, EntityProto, UseSite};

    fn pair(a: &str, b: &str) -> (String, String) {
        (a.to_string(), b.to_string())
    }

    /// Tree with `n` Kotlin functions f0..fn-1 plus a relation recorder.
    fn chain_fixture(n: usize) -> (EntityTree, Vec<crate::model::EntityId>) {
        let mut tree = EntityTree::with_builtins();
        let mut ids = Vec::new();
        for i in 0..n {
            ids.push(
                tree.intern(EntityProto::new(
                    format!("f{i}"),
                    EntityKind::Function,
                    SourceLanguage::Kotlin,
                ))
                .unwrap(),
            );
        }
        (tree, ids)
    }

    fn site(line: u32) -> UseSite {
        UseSite {
            path: "x.kt".to_string(),
            line,
        }
    }

    #[test]
    fn nine_found_one_notfound_three_missed_gives_the_formula_values() {
        let (tree, ids) = chain_fixture(14);
        // Truth: 12 records f0->f1 .. f11->f12.
        let mut records = Vec::new();
        for i in 0..12 {
            records.push(TruthRecord {
                source_qualified_name: format!("f{i}"),
                target_qualified_name: format!("f{}", i + 1),
                kind: RelationKind::Call,
                language_pair: pair("kotlin", "kotlin"),
            });
        }
        let truth = GroundTruth::from_records(records).unwrap();
        // Extracted: the first 9 truth edges plus one edge outside the truth.
        let mut store = RelationStore::new();
        for i in 0..9 {
            store
                .record(
                    &tree,
                    ids[i],
                    ids[i + 1],
                    RelationKind::Call,
                    site(i as u32 + 1),
                )
                .unwrap();
        }
        store
            .record(&tree, ids[12], ids[13], RelationKind::Call, site(99))
            .unwrap();
        let report = compare(&store, &tree, &truth);
        assert_eq!((report.found, report.not_found, report.missed), (9, 1, 3));
        assert!((report.precision.unwrap() - 0.9).abs() < 1e-9);
        assert!((report.recall.unwrap() - 0.75).abs() < 1e-9);
    }

    #[test]
    fn identical_sets_give_perfect_scores() {
        let (tree, ids) = chain_fixture(5);
        let mut store = RelationStore::new();
        let mut records = Vec::new();
        for i in 0..4 {
            store
                .record(&tree, ids[i], ids[i + 1], RelationKind::Call, site(1))
                .unwrap();
            records.push(TruthRecord {
                source_qualified_name: format!("f{i}"),
                target_qualified_name: format!("f{}", i + 1),
                kind: RelationKind::Call,
                language_pair: pair("kotlin", "kotlin"),
            });
        }
        let truth = GroundTruth::from_records(records).unwrap();
        let report = compare(&store, &tree, &truth);
        assert_eq!(report.precision, Some(1.0));
        assert_eq!(report.recall, Some(1.0));
        assert_eq!(report.found + report.missed, truth.len());
    }

    #[test]
    fn zero_denominators_report_not_applicable() {
        let (tree, _) = chain_fixture(1);
        let store = RelationStore::new();
        let truth = GroundTruth::from_records(Vec::new()).unwrap();
        let report = compare(&store, &tree, &truth);
        assert_eq!(report.precision, None);
        assert_eq!(report.recall, None);
    }

    #[test]
    fn accessor_target_matches_truth_naming_the_property() {
        let mut tree = EntityTree::with_builtins();
        let class = tree
            .intern(EntityProto::new(
                "BarKotlin",
                EntityKind::Type,
                SourceLanguage::Kotlin,
            ))
            .unwrap();
        let property = tree
            .intern(
                EntityProto::new("x", EntityKind::Property, SourceLanguage::Kotlin)
                    .with_parent(class),
            )
            .unwrap();
        let mut getter = EntityProto::new("getX", EntityKind::Function, SourceLanguage::Kotlin)
            .with_parent(class);
        getter.is_synthetic = true;
        let getter = tree.intern(getter).unwrap();
        tree.link_accessor(getter, property);
        let caller = tree
            .intern(EntityProto::new(
                "func",
                EntityKind::Function,
                SourceLanguage::Java,
            ))
            .unwrap();
        let mut store = RelationStore::new();
        store
            .record(&tree, caller, getter, RelationKind::Call, site(3))
            .unwrap();
        let truth = GroundTruth::from_records(vec![TruthRecord {
            source_qualified_name: "func".to_string(),
            target_qualified_name: "BarKotlin.x".to_string(),
            kind: RelationKind::Call,
            language_pair: pair("java", "kotlin"),
        }])
        .unwrap();
        let report = compare(&store, &tree, &truth);
        assert_eq!(report.found, 1);
        assert_eq!(report.missed, 0);
    }

    #[test]
    fn duplicate_truth_records_are_rejected() {
        let record = TruthRecord {
            source_qualified_name: "a".to_string(),
            target_qualified_name: "b".to_string(),
            kind: RelationKind::Use,
            language_pair: pair("kotlin", "kotlin"),
        };
        assert!(GroundTruth::from_records(vec![record.clone(), record]).is_err());
    }
}
