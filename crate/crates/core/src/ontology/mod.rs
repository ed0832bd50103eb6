//! Class-based ontology derived from a feature model.
//!
//! Mapping:
//! - each feature becomes a class named after its path with `.` → `_`;
//! - a mandatory child is a composition part of its parent, an optional
//!   child an aggregation part;
//! - an alternative group becomes an abstract class `<Parent>_<i>_Alt`
//!   composed into the parent, an or group an abstract `<Parent>_<i>_Or`
//!   aggregated into it (`i` is the 1-based group position); the group's
//!   members are its subclasses;
//! - cross-tree constraints become comments on the left-hand class.
//!
//! Class names that would collide get a `_2`, `_3`, … suffix, features
//! first in preorder, then group classes.

mod dot;
mod fmx;

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::model::{ChildGroup, FeatureId, FeatureModel, FeaturePath, Variability};

pub use dot::emit_dot;
pub use fmx::emit_fmx;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OntologyClass {
    pub name: String,
    /// Full name of the feature, when it has one.
    pub label: Option<String>,
    /// Feature description first, then one entry per constraint.
    pub comments: Vec<String>,
    pub is_abstract: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationKind {
    Composition,
    Aggregation,
    Generalization,
}

impl RelationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RelationKind::Composition => "composition",
            RelationKind::Aggregation => "aggregation",
            RelationKind::Generalization => "generalization",
        }
    }
}

/// `whole` is the whole (composition/aggregation) or the superclass
/// (generalization); `part` the part or subclass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OntologyRelation {
    pub kind: RelationKind,
    pub whole: String,
    pub part: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OntologyModel {
    pub name: String,
    /// Keyed by class name.
    pub classes: BTreeMap<String, OntologyClass>,
    /// In derivation order.
    pub relations: Vec<OntologyRelation>,
}

impl OntologyModel {
    pub fn count(&self, kind: RelationKind) -> usize {
        self.relations.iter().filter(|r| r.kind == kind).count()
    }
}

struct Namer {
    taken: HashSet<String>,
}

impl Namer {
    fn claim(&mut self, base: String) -> String {
        let mut name = base.clone();
        let mut n = 2;
        while self.taken.contains(&name) {
            name = format!("{base}_{n}");
            n += 1;
        }
        self.taken.insert(name.clone());
        name
    }
}

/// Class name of every feature.
pub fn class_names(model: &FeatureModel) -> BTreeMap<FeaturePath, String> {
    let mut namer = Namer {
        taken: HashSet::new(),
    };
    model
        .preorder()
        .into_iter()
        .map(|id| {
            let p = model.feature(id).path();
            (p.clone(), namer.claim(p.as_str().replace('.', "_")))
        })
        .collect()
}

pub fn to_ontology(model: &FeatureModel) -> OntologyModel {
    let order = model.preorder();
    let mut namer = Namer {
        taken: HashSet::new(),
    };
    let names: HashMap<FeatureId, String> = order
        .iter()
        .map(|&id| {
            (
                id,
                namer.claim(model.feature(id).path().as_str().replace('.', "_")),
            )
        })
        .collect();

    let mut onto = OntologyModel {
        name: model.name().to_string(),
        ..OntologyModel::default()
    };
    for &id in &order {
        let f = model.feature(id);
        onto.classes.insert(
            names[&id].clone(),
            OntologyClass {
                name: names[&id].clone(),
                label: f.annotations.full_name.clone(),
                comments: f.annotations.description.iter().cloned().collect(),
                is_abstract: false,
            },
        );
    }

    let relate = |onto: &mut OntologyModel, kind, whole: &str, part: &str| {
        onto.relations.push(OntologyRelation {
            kind,
            whole: whole.to_string(),
            part: part.to_string(),
        })
    };
    for &id in &order {
        let f = model.feature(id);
        let parent = &names[&id];
        for (i, g) in f.child_groups().iter().enumerate() {
            match g {
                ChildGroup::And(children) => {
                    for (c, v) in children {
                        let kind = match v {
                            Variability::Mandatory => RelationKind::Composition,
                            Variability::Optional => RelationKind::Aggregation,
                        };
                        relate(&mut onto, kind, parent, &names[c]);
                    }
                }
                ChildGroup::Alternative(children) | ChildGroup::Or(children) => {
                    let (suffix, kind) = if matches!(g, ChildGroup::Alternative(_)) {
                        ("Alt", RelationKind::Composition)
                    } else {
                        ("Or", RelationKind::Aggregation)
                    };
                    let group = namer.claim(format!("{parent}_{}_{suffix}", i + 1));
                    onto.classes.insert(
                        group.clone(),
                        OntologyClass {
                            name: group.clone(),
                            label: None,
                            comments: Vec::new(),
                            is_abstract: true,
                        },
                    );
                    relate(&mut onto, kind, parent, &group);
                    for c in children {
                        relate(&mut onto, RelationKind::Generalization, &group, &names[c]);
                    }
                }
            }
        }
    }

    for c in model.constraints() {
        let (Some(l), Some(r)) = (model.lookup(c.lhs.as_str()), model.lookup(c.rhs.as_str()))
        else {
            continue;
        };
        if let Some(class) = onto.classes.get_mut(&names[&l]) {
            class
                .comments
                .push(format!("{} {}", c.kind.as_str(), names[&r]));
        }
    }
    onto
}

pub(crate) fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_model;

    fn m(src: &str) -> FeatureModel {
        parse_model(&format!("model \"M\" {{ {src} }}")).unwrap()
    }

    fn rel(kind: RelationKind, whole: &str, part: &str) -> OntologyRelation {
        OntologyRelation {
            kind,
            whole: whole.into(),
            part: part.into(),
        }
    }

    #[test]
    fn mandatory_is_composition() {
        let o = to_ontology(&m("feature R { mandatory feature A }"));
        assert_eq!(o.classes.keys().collect::<Vec<_>>(), ["R", "R_A"]);
        assert_eq!(o.relations, [rel(RelationKind::Composition, "R", "R_A")]);
    }

    #[test]
    fn optional_is_aggregation() {
        let o = to_ontology(&m("feature R { optional feature B }"));
        assert_eq!(o.relations, [rel(RelationKind::Aggregation, "R", "R_B")]);
    }

    #[test]
    fn alternative_group() {
        let o = to_ontology(&m("feature R { alt { feature C feature D } }"));
        assert_eq!(
            o.classes.keys().collect::<Vec<_>>(),
            ["R", "R_1_Alt", "R_C", "R_D"]
        );
        assert!(o.classes["R_1_Alt"].is_abstract);
        assert_eq!(
            o.relations,
            [
                rel(RelationKind::Composition, "R", "R_1_Alt"),
                rel(RelationKind::Generalization, "R_1_Alt", "R_C"),
                rel(RelationKind::Generalization, "R_1_Alt", "R_D"),
            ]
        );
    }

    #[test]
    fn or_group_second_position() {
        let o = to_ontology(&m("feature R { feature A or { feature X feature Y } }"));
        assert_eq!(
            o.relations[1],
            rel(RelationKind::Aggregation, "R", "R_2_Or")
        );
        assert_eq!(o.count(RelationKind::Generalization), 2);
    }

    #[test]
    fn labels_comments_notes() {
        let o = to_ontology(&m(
            "feature R (fullname \"Root\", desc \"the root\") { feature A feature B } \
             constraints { R.A requires R.B R.A excludes R }",
        ));
        assert_eq!(o.classes["R"].label.as_deref(), Some("Root"));
        assert_eq!(o.classes["R"].comments, ["the root"]);
        assert_eq!(o.classes["R_A"].comments, ["requires R_B", "excludes R"]);
    }

    #[test]
    fn colliding_names_get_suffixes() {
        let model = m("feature R { feature A_B feature A { feature B } }");
        let names = class_names(&model);
        assert_eq!(names[&FeaturePath::new("R.A_B")], "R_A_B");
        assert_eq!(names[&FeaturePath::new("R.A.B")], "R_A_B_2");
        let o = to_ontology(&model);
        assert_eq!(o.classes.len(), 4);
    }
}
