//! Configuration semantics.
//!
//! A configuration is valid when:
//! - the root is selected;
//! - every selected non-root feature has a selected parent;
//! - a selected feature's mandatory children are selected;
//! - a selected feature's alternative group has exactly one selected member;
//! - a selected feature's or group has at least one selected member;
//! - `a requires b` holds unless `a` is in and `b` out, `a excludes b`
//!   unless both are in.

mod analysis;
mod compiled;
mod count;
mod enumerate;
mod propagate;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::model::{ConstraintKind, FeatureModel, FeaturePath, GroupKind, Role};

pub use analysis::{
    analyze, analyze_with_bound, core_features, dead_features, false_optional_features,
    AnalysisReport,
};
pub use count::{
    count_as, count_by_tree_product, count_configurations, count_configurations_with_bound,
};
pub use enumerate::{enumerate_configurations, Enumeration};
pub use propagate::{propagate, DecisionState};

use compiled::Compiled;

/// Most decision points a constrained model may have before exact analysis
/// refuses to run.
pub const DEFAULT_COUNT_BOUND: usize = 30;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("unknown feature path `{0}`")]
    UnknownPath(FeaturePath),
    #[error("model has {decision_points} decision points with constraints, bound is {bound}")]
    CountTooLarge {
        decision_points: usize,
        bound: usize,
    },
}

/// A set of selected features: one candidate product.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    selected: BTreeSet<FeaturePath>,
}

impl Configuration {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, path: impl Into<FeaturePath>) -> bool {
        self.selected.insert(path.into())
    }

    pub fn contains(&self, path: &str) -> bool {
        self.selected.contains(path)
    }

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    /// Paths in sorted order.
    pub fn iter(&self) -> impl Iterator<Item = &FeaturePath> {
        self.selected.iter()
    }

    pub fn paths(&self) -> &BTreeSet<FeaturePath> {
        &self.selected
    }
}

impl<P: Into<FeaturePath>> FromIterator<P> for Configuration {
    fn from_iter<I: IntoIterator<Item = P>>(iter: I) -> Self {
        Configuration {
            selected: iter.into_iter().map(Into::into).collect(),
        }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.selected.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(p.as_str())?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ValidityRule {
    RootMissing,
    /// A selected and-child whose parent is not selected.
    ParentMissing,
    MandatoryMissing,
    AlternativeNotExactlyOne,
    OrNoneSelected,
    RequiresViolated,
    ExcludesViolated,
    /// A selected alternative/or member whose parent is not selected.
    ChildWithoutParentGroupMember,
}

impl ValidityRule {
    pub fn as_str(self) -> &'static str {
        match self {
            ValidityRule::RootMissing => "RootMissing",
            ValidityRule::ParentMissing => "ParentMissing",
            ValidityRule::MandatoryMissing => "MandatoryMissing",
            ValidityRule::AlternativeNotExactlyOne => "AlternativeNotExactlyOne",
            ValidityRule::OrNoneSelected => "OrNoneSelected",
            ValidityRule::RequiresViolated => "RequiresViolated",
            ValidityRule::ExcludesViolated => "ExcludesViolated",
            ValidityRule::ChildWithoutParentGroupMember => "ChildWithoutParentGroupMember",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidityViolation {
    pub rule: ValidityRule,
    pub subject: FeaturePath,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidityReport {
    pub violations: Vec<ValidityViolation>,
}

impl ValidityReport {
    pub fn valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn rules(&self) -> Vec<ValidityRule> {
        self.violations.iter().map(|v| v.rule).collect()
    }
}

/// Checks every selection rule and constraint; violations come out in
/// feature preorder, then constraint order.
pub fn validate_configuration(
    model: &FeatureModel,
    config: &Configuration,
) -> Result<ValidityReport, AnalysisError> {
    let c = Compiled::new(model)?;
    let mut sel = vec![false; c.len()];
    for p in config.iter() {
        sel[c.index_of(p.as_str())?] = true;
    }
    let mut violations = Vec::new();
    let mut push = |rule, subject: &FeaturePath, detail: String| {
        violations.push(ValidityViolation {
            rule,
            subject: subject.clone(),
            detail,
        })
    };
    if !sel[0] {
        push(
            ValidityRule::RootMissing,
            &c.paths[0],
            "root is always selected".into(),
        );
    }
    for f in 0..c.len() {
        if !sel[f] {
            continue;
        }
        if let Some(p) = c.parent[f] {
            if !sel[p] {
                let rule = match c.role[f] {
                    Role::Alternative | Role::Or => ValidityRule::ChildWithoutParentGroupMember,
                    _ => ValidityRule::ParentMissing,
                };
                push(
                    rule,
                    &c.paths[f],
                    format!("parent `{}` is not selected", c.paths[p]),
                );
            }
        }
        for g in &c.groups[f] {
            let on = g.members.iter().filter(|&&m| sel[m]).count();
            match g.kind {
                GroupKind::And => {
                    for &m in &g.members {
                        if c.role[m] == Role::Mandatory && !sel[m] {
                            push(
                                ValidityRule::MandatoryMissing,
                                &c.paths[m],
                                format!("mandatory child of selected `{}`", c.paths[f]),
                            );
                        }
                    }
                }
                GroupKind::Alternative if on != 1 => push(
                    ValidityRule::AlternativeNotExactlyOne,
                    &c.paths[f],
                    format!("{on} of {} alternatives selected", g.members.len()),
                ),
                GroupKind::Or if on == 0 => push(
                    ValidityRule::OrNoneSelected,
                    &c.paths[f],
                    format!("none of {} or-members selected", g.members.len()),
                ),
                _ => {}
            }
        }
    }
    for &(kind, a, b) in &c.constraints {
        match kind {
            ConstraintKind::Requires if sel[a] && !sel[b] => push(
                ValidityRule::RequiresViolated,
                &c.paths[a],
                format!("requires `{}`", c.paths[b]),
            ),
            ConstraintKind::Excludes if sel[a] && sel[b] => push(
                ValidityRule::ExcludesViolated,
                &c.paths[a],
                format!("excludes `{}`", c.paths[b]),
            ),
            _ => {}
        }
    }
    Ok(ValidityReport { violations })
}
