use std::collections::BTreeSet;

use crate::model::{ConstraintKind, FeatureModel, FeaturePath, GroupKind, Role};

use super::compiled::Compiled;
use super::{AnalysisError, Configuration};

/// Consequences of a partial selection.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecisionState {
    pub implied_in: BTreeSet<FeaturePath>,
    pub implied_out: BTreeSet<FeaturePath>,
    /// First feature found forced both ways, with the rule that flipped it.
    pub contradiction: Option<(FeaturePath, String)>,
}

struct Prop<'a> {
    c: &'a Compiled,
    state: Vec<Option<bool>>,
    changed: bool,
    contradiction: Option<(usize, String)>,
}

impl Prop<'_> {
    fn set(&mut self, f: usize, value: bool, why: impl FnOnce() -> String) {
        if self.contradiction.is_some() {
            return;
        }
        match self.state[f] {
            Some(v) if v == value => {}
            Some(_) => self.contradiction = Some((f, why())),
            None => {
                self.state[f] = Some(value);
                self.changed = true;
            }
        }
    }

    fn sweep(&mut self) {
        let c = self.c;
        for f in 0..c.len() {
            match self.state[f] {
                Some(true) => {
                    if let Some(p) = c.parent[f] {
                        self.set(p, true, || format!("parent of selected `{}`", c.paths[f]));
                    }
                    for g in &c.groups[f] {
                        self.group_rules(f, g.kind, &g.members);
                    }
                }
                Some(false) => {
                    for g in &c.groups[f] {
                        for &m in &g.members {
                            self.set(m, false, || format!("child of excluded `{}`", c.paths[f]));
                        }
                    }
                    if c.role[f] == Role::Mandatory {
                        if let Some(p) = c.parent[f] {
                            self.set(p, false, || {
                                format!("mandatory child `{}` is excluded", c.paths[f])
                            });
                        }
                    }
                }
                None => {}
            }
        }
        for &(kind, a, b) in &c.constraints {
            match (kind, self.state[a], self.state[b]) {
                (ConstraintKind::Requires, Some(true), _) => {
                    self.set(b, true, || format!("required by `{}`", c.paths[a]))
                }
                (ConstraintKind::Requires, _, Some(false)) => {
                    self.set(a, false, || format!("requires excluded `{}`", c.paths[b]))
                }
                (ConstraintKind::Excludes, Some(true), _) => {
                    self.set(b, false, || format!("excluded by `{}`", c.paths[a]))
                }
                (ConstraintKind::Excludes, _, Some(true)) => {
                    self.set(a, false, || format!("excluded by `{}`", c.paths[b]))
                }
                _ => {}
            }
        }
    }

    /// Rules for a group whose parent `f` is selected.
    fn group_rules(&mut self, f: usize, kind: GroupKind, members: &[usize]) {
        let c = self.c;
        match kind {
            GroupKind::And => {
                for &m in members {
                    if c.role[m] == Role::Mandatory {
                        self.set(m, true, || format!("mandatory child of `{}`", c.paths[f]));
                    }
                }
            }
            GroupKind::Alternative | GroupKind::Or => {
                let on: Vec<_> = members
                    .iter()
                    .copied()
                    .filter(|&m| self.state[m] == Some(true))
                    .collect();
                let open: Vec<_> = members
                    .iter()
                    .copied()
                    .filter(|&m| self.state[m].is_none())
                    .collect();
                if kind == GroupKind::Alternative {
                    if let Some(&chosen) = on.first() {
                        for &m in members {
                            if m != chosen {
                                self.set(m, false, || {
                                    format!("alternative `{}` already chosen", c.paths[chosen])
                                });
                            }
                        }
                        return;
                    }
                }
                if on.is_empty() {
                    match open.as_slice() {
                        [] => {
                            if self.contradiction.is_none() {
                                self.contradiction = Some((
                                    f,
                                    format!(
                                        "every group member under `{}` is excluded",
                                        c.paths[f]
                                    ),
                                ));
                            }
                        }
                        [last] => self.set(*last, true, || {
                            format!("last open group member under `{}`", c.paths[f])
                        }),
                        _ => {}
                    }
                }
            }
        }
    }
}

/// Applies the selection rules and constraints as implications until nothing
/// changes.
///
/// Sound but incomplete: everything reported holds in every valid extension
/// of `partial`, yet some forced decisions may go unreported.
pub fn propagate(
    model: &FeatureModel,
    partial: &Configuration,
) -> Result<DecisionState, AnalysisError> {
    let c = Compiled::new(model)?;
    let mut p = Prop {
        c: &c,
        state: vec![None; c.len()],
        changed: true,
        contradiction: None,
    };
    p.state[0] = Some(true);
    for path in partial.iter() {
        let f = c.index_of(path.as_str())?;
        p.set(f, true, || "selected".to_string());
    }
    while p.changed && p.contradiction.is_none() {
        p.changed = false;
        p.sweep();
    }
    let mut out = DecisionState::default();
    for (f, s) in p.state.iter().enumerate() {
        match s {
            Some(true) => out.implied_in.insert(c.paths[f].clone()),
            Some(false) => out.implied_out.insert(c.paths[f].clone()),
            None => false,
        };
    }
    out.contradiction = p.contradiction.map(|(f, why)| (c.paths[f].clone(), why));
    Ok(out)
}
