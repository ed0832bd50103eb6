//! Commonality/variability comparison of two feature models.
//!
//! Features are paired first through an explicit [`NameMap`], then by exact
//! leaf name. A leaf name that occurs more than once in either model (the
//! two `PDCP` features of the LTE-A model, for instance) only pairs features
//! with identical full paths; whatever is left is reported as ambiguous.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::model::{FeatureModel, FeaturePath, Role};
use crate::CommonalityIndex;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NameMapError {
    #[error("line {line}: expected `PATH_A = PATH_B`")]
    Syntax { line: usize },
    #[error("`{0}` does not resolve in model A")]
    UnknownA(FeaturePath),
    #[error("`{0}` does not resolve in model B")]
    UnknownB(FeaturePath),
    #[error("`{0}` is mapped more than once")]
    Duplicate(FeaturePath),
}

/// Declared cross-model equivalences, `A` side first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NameMap {
    pub pairs: Vec<(FeaturePath, FeaturePath)>,
}

impl NameMap {
    /// Reads `PATH_A = PATH_B` lines; `#` starts a comment, blank lines are
    /// skipped.
    pub fn parse(text: &str) -> Result<Self, NameMapError> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (a, b) = line
                .split_once('=')
                .map(|(a, b)| (a.trim(), b.trim()))
                .filter(|(a, b)| {
                    !a.is_empty()
                        && !b.is_empty()
                        && !a.contains(char::is_whitespace)
                        && !b.contains(char::is_whitespace)
                })
                .ok_or(NameMapError::Syntax { line: i + 1 })?;
            pairs.push((FeaturePath::new(a), FeaturePath::new(b)));
        }
        Ok(NameMap { pairs })
    }

    pub fn mirrored(&self) -> NameMap {
        NameMap {
            pairs: self
                .pairs
                .iter()
                .map(|(a, b)| (b.clone(), a.clone()))
                .collect(),
        }
    }

    pub fn validate(&self, a: &FeatureModel, b: &FeatureModel) -> Result<(), NameMapError> {
        let (mut seen_a, mut seen_b) = (BTreeSet::new(), BTreeSet::new());
        for (pa, pb) in &self.pairs {
            if a.lookup(pa.as_str()).is_none() {
                return Err(NameMapError::UnknownA(pa.clone()));
            }
            if b.lookup(pb.as_str()).is_none() {
                return Err(NameMapError::UnknownB(pb.clone()));
            }
            if !seen_a.insert(pa) {
                return Err(NameMapError::Duplicate(pa.clone()));
            }
            if !seen_b.insert(pb) {
                return Err(NameMapError::Duplicate(pb.clone()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MatchedBy {
    Name,
    Map,
}

impl MatchedBy {
    pub fn as_str(self) -> &'static str {
        match self {
            MatchedBy::Name => "name",
            MatchedBy::Map => "map",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CommonPair {
    pub a: FeaturePath,
    pub b: FeaturePath,
    pub matched_by: MatchedBy,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RoleMismatch {
    pub a: FeaturePath,
    pub b: FeaturePath,
    pub role_a: Role,
    pub role_b: Role,
}

/// A leaf name present in both models whose features stayed unpaired
/// because it occurs more than once on at least one side.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AmbiguousName {
    pub name: String,
    pub in_a: Vec<FeaturePath>,
    pub in_b: Vec<FeaturePath>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonReport {
    pub model_a: String,
    pub model_b: String,
    pub common: BTreeSet<CommonPair>,
    pub only_a: BTreeSet<FeaturePath>,
    pub only_b: BTreeSet<FeaturePath>,
    pub classification_mismatches: Vec<RoleMismatch>,
    pub ambiguous: Vec<AmbiguousName>,
}

impl ComparisonReport {
    /// `|common| / (|common| + |only_a| + |only_b|)`, or 1 when all three
    /// are empty.
    pub fn commonality_index(&self) -> CommonalityIndex {
        commonality_index(self.common.len(), self.only_a.len(), self.only_b.len())
    }

    /// Same index as a float, via any `num_traits::Float`-like target.
    pub fn commonality_as<F: num_traits::NumCast>(&self) -> F {
        let r = self.commonality_index();
        let v = r.numer().to_f64().unwrap_or(0.0) / r.denom().to_f64().unwrap_or(1.0);
        F::from(v).expect("index is in [0, 1]")
    }

    /// The report `compare(b, a)` would produce.
    pub fn mirrored(&self) -> ComparisonReport {
        let mut ambiguous: Vec<_> = self
            .ambiguous
            .iter()
            .map(|x| AmbiguousName {
                name: x.name.clone(),
                in_a: x.in_b.clone(),
                in_b: x.in_a.clone(),
            })
            .collect();
        ambiguous.sort();
        let mut classification_mismatches: Vec<_> = self
            .classification_mismatches
            .iter()
            .map(|m| RoleMismatch {
                a: m.b.clone(),
                b: m.a.clone(),
                role_a: m.role_b,
                role_b: m.role_a,
            })
            .collect();
        classification_mismatches.sort();
        ComparisonReport {
            model_a: self.model_b.clone(),
            model_b: self.model_a.clone(),
            common: self
                .common
                .iter()
                .map(|p| CommonPair {
                    a: p.b.clone(),
                    b: p.a.clone(),
                    matched_by: p.matched_by,
                })
                .collect(),
            only_a: self.only_b.clone(),
            only_b: self.only_a.clone(),
            classification_mismatches,
            ambiguous,
        }
    }
}

pub fn commonality_index(common: usize, only_a: usize, only_b: usize) -> CommonalityIndex {
    let total = common + only_a + only_b;
    if total == 0 {
        Ratio::one()
    } else {
        Ratio::new(common as u64, total as u64)
    }
}

impl fmt::Display for MatchedBy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn compare_models(
    a: &FeatureModel,
    b: &FeatureModel,
    map: Option<&NameMap>,
) -> Result<ComparisonReport, NameMapError> {
    let mut matched_a: BTreeMap<FeaturePath, (FeaturePath, MatchedBy)> = BTreeMap::new();
    let mut matched_b: BTreeSet<FeaturePath> = BTreeSet::new();

    if let Some(map) = map {
        map.validate(a, b)?;
        for (pa, pb) in &map.pairs {
            matched_a.insert(pa.clone(), (pb.clone(), MatchedBy::Map));
            matched_b.insert(pb.clone());
        }
    }

    fn by_leaf(m: &FeatureModel) -> BTreeMap<&str, Vec<FeaturePath>> {
        let mut out: BTreeMap<&str, Vec<FeaturePath>> = BTreeMap::new();
        for f in m.features() {
            out.entry(f.name()).or_default().push(f.path().clone());
        }
        for v in out.values_mut() {
            v.sort();
        }
        out
    }
    let (leaves_a, leaves_b) = (by_leaf(a), by_leaf(b));
    let mut ambiguous = Vec::new();
    for (name, in_a) in &leaves_a {
        let Some(in_b) = leaves_b.get(name) else {
            continue;
        };
        match (in_a.as_slice(), in_b.as_slice()) {
            ([pa], [pb]) => {
                if !matched_a.contains_key(pa) && !matched_b.contains(pb) {
                    matched_a.insert(pa.clone(), (pb.clone(), MatchedBy::Name));
                    matched_b.insert(pb.clone());
                }
            }
            _ => {
                for pa in in_a {
                    if in_b.contains(pa) && !matched_a.contains_key(pa) && !matched_b.contains(pa) {
                        matched_a.insert(pa.clone(), (pa.clone(), MatchedBy::Name));
                        matched_b.insert(pa.clone());
                    }
                }
                let left_a: Vec<_> = in_a
                    .iter()
                    .filter(|p| !matched_a.contains_key(*p))
                    .cloned()
                    .collect();
                let left_b: Vec<_> = in_b
                    .iter()
                    .filter(|p| !matched_b.contains(*p))
                    .cloned()
                    .collect();
                if !left_a.is_empty() && !left_b.is_empty() {
                    ambiguous.push(AmbiguousName {
                        name: name.to_string(),
                        in_a: left_a,
                        in_b: left_b,
                    });
                }
            }
        }
    }

    let role = |m: &FeatureModel, p: &FeaturePath| m.by_path(p.as_str()).map(|f| f.role());
    let mut classification_mismatches = Vec::new();
    let mut common = BTreeSet::new();
    for (pa, (pb, how)) in &matched_a {
        let (ra, rb) = (role(a, pa), role(b, pb));
        if let (Some(role_a), Some(role_b)) = (ra, rb) {
            if role_a != role_b {
                classification_mismatches.push(RoleMismatch {
                    a: pa.clone(),
                    b: pb.clone(),
                    role_a,
                    role_b,
                });
            }
        }
        common.insert(CommonPair {
            a: pa.clone(),
            b: pb.clone(),
            matched_by: *how,
        });
    }
    classification_mismatches.sort();

    let only = |m: &FeatureModel, taken: &dyn Fn(&FeaturePath) -> bool| -> BTreeSet<FeaturePath> {
        m.features()
            .map(|f| f.path().clone())
            .filter(|p| !taken(p))
            .collect()
    };
    let only_a = only(a, &|p| matched_a.contains_key(p));
    let only_b = only(b, &|p| matched_b.contains(p));

    Ok(ComparisonReport {
        model_a: a.name().to_string(),
        model_b: b.name().to_string(),
        common,
        only_a,
        only_b,
        classification_mismatches,
        ambiguous,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_model;

    fn m(name: &str, src: &str) -> FeatureModel {
        parse_model(&format!("model \"{name}\" {{ {src} }}")).unwrap()
    }

    #[test]
    fn self_comparison() {
        let a = m(
            "A",
            "feature R { mandatory feature X optional feature Y alt { feature P feature Q } }",
        );
        let r = compare_models(&a, &a, None).unwrap();
        assert_eq!(r.common.len(), 5);
        assert!(r
            .common
            .iter()
            .all(|p| p.a == p.b && p.matched_by == MatchedBy::Name));
        assert!(r.only_a.is_empty() && r.only_b.is_empty());
        assert_eq!(r.commonality_index(), Ratio::one());
        assert!(r.classification_mismatches.is_empty());
    }

    #[test]
    fn index_arithmetic() {
        assert_eq!(commonality_index(0, 0, 0), Ratio::one());
        assert_eq!(commonality_index(0, 3, 2), Ratio::new(0, 1));
        assert_eq!(commonality_index(2, 1, 1), Ratio::new(1, 2));
        let a = m("A", "feature R1 { feature A1 feature A2 }");
        let b = m("B", "feature R2 { feature B1 }");
        let r = compare_models(&a, &b, None).unwrap();
        assert_eq!(r.commonality_index(), Ratio::new(0, 1));
        assert_eq!(r.commonality_as::<f64>(), 0.0);
    }

    #[test]
    fn map_takes_precedence() {
        let a = m("A", "feature A { mandatory feature X optional feature Y }");
        let b = m("B", "feature B { optional feature Y feature Z }");
        let map = NameMap::parse("# pairs\nA.X = B.Y  # renamed\n\n").unwrap();
        let r = compare_models(&a, &b, Some(&map)).unwrap();
        assert!(r.common.contains(&CommonPair {
            a: "A.X".into(),
            b: "B.Y".into(),
            matched_by: MatchedBy::Map
        }));
        // B.Y is taken, so A.Y stays unmatched despite the name
        assert!(r.only_a.contains("A.Y"));
        assert_eq!(r.classification_mismatches.len(), 1);
        assert_eq!(r.classification_mismatches[0].role_a, Role::Mandatory);
        assert_eq!(r.classification_mismatches[0].role_b, Role::Optional);
    }

    #[test]
    fn duplicated_names_never_auto_match() {
        let a = m(
            "A",
            "feature R { feature U { feature PDCP } feature C { feature PDCP } }",
        );
        let b = m("B", "feature S { feature PDCP }");
        let r = compare_models(&a, &b, None).unwrap();
        assert!(r.common.is_empty());
        assert_eq!(r.ambiguous.len(), 1);
        assert_eq!(r.ambiguous[0].in_a.len(), 2);
        // even once one of them is mapped
        let map = NameMap::parse("R.U.PDCP = S.PDCP").unwrap();
        let r = compare_models(&a, &b, Some(&map)).unwrap();
        assert_eq!(r.common.len(), 1);
        assert!(r.only_a.contains("R.C.PDCP"));
    }

    #[test]
    fn duplicated_names_pair_on_identical_paths() {
        let a = m(
            "A",
            "feature R { feature U { feature PDCP } feature C { feature PDCP } }",
        );
        let b = m(
            "B",
            "feature R { feature U { feature PDCP } feature D { feature PDCP } }",
        );
        let r = compare_models(&a, &b, None).unwrap();
        assert!(r.common.contains(&CommonPair {
            a: "R.U.PDCP".into(),
            b: "R.U.PDCP".into(),
            matched_by: MatchedBy::Name
        }));
        assert_eq!(r.ambiguous.len(), 1);
        assert_eq!(r.ambiguous[0].in_a, [FeaturePath::new("R.C.PDCP")]);
        assert_eq!(r.ambiguous[0].in_b, [FeaturePath::new("R.D.PDCP")]);
        assert_eq!(
            compare_models(&a, &a, None).unwrap().commonality_index(),
            Ratio::one()
        );
    }

    #[test]
    fn bad_maps() {
        let a = m("A", "feature A { feature X feature W }");
        let b = m("B", "feature B { feature Y }");
        assert_eq!(
            NameMap::parse("A.X B.Y"),
            Err(NameMapError::Syntax { line: 1 })
        );
        assert_eq!(
            NameMap::parse("\n = B.Y"),
            Err(NameMapError::Syntax { line: 2 })
        );
        let bad = |t: &str| compare_models(&a, &b, Some(&NameMap::parse(t).unwrap())).unwrap_err();
        assert_eq!(bad("A.Q = B.Y"), NameMapError::UnknownA("A.Q".into()));
        assert_eq!(bad("A.X = B.Q"), NameMapError::UnknownB("B.Q".into()));
        assert_eq!(
            bad("A.X = B.Y\nA.W = B.Y"),
            NameMapError::Duplicate("B.Y".into())
        );
    }

    #[test]
    fn mirrored_matches_swapped_call() {
        let a = m(
            "A",
            "feature R { mandatory feature X optional feature Y { feature K feature K2 } }",
        );
        let b = m(
            "B",
            "feature R { optional feature X feature K { feature Y } }",
        );
        let ab = compare_models(&a, &b, None).unwrap();
        let ba = compare_models(&b, &a, None).unwrap();
        assert_eq!(ab.mirrored(), ba);
        assert_eq!(ab.commonality_index(), ba.commonality_index());
    }
}
