use std::collections::HashMap;

use crate::model::{ConstraintKind, FeatureId, FeatureModel, FeaturePath, GroupKind, Role};

use super::AnalysisError;

pub(crate) struct Group {
    pub kind: GroupKind,
    pub members: Vec<usize>,
}

/// Index-based view of a model: features numbered in preorder, so a parent
/// always has a smaller index than its children.
pub(crate) struct Compiled {
    pub paths: Vec<FeaturePath>,
    pub parent: Vec<Option<usize>>,
    pub role: Vec<Role>,
    pub groups: Vec<Vec<Group>>,
    pub constraints: Vec<(ConstraintKind, usize, usize)>,
    by_path: HashMap<FeaturePath, usize>,
}

impl Compiled {
    pub fn new(model: &FeatureModel) -> Result<Self, AnalysisError> {
        let order = model.preorder();
        let index: HashMap<FeatureId, usize> =
            order.iter().enumerate().map(|(i, id)| (*id, i)).collect();
        let mut c = Compiled {
            paths: Vec::with_capacity(order.len()),
            parent: Vec::with_capacity(order.len()),
            role: Vec::with_capacity(order.len()),
            groups: Vec::with_capacity(order.len()),
            constraints: Vec::new(),
            by_path: HashMap::with_capacity(order.len()),
        };
        for (i, id) in order.iter().enumerate() {
            let f = model.feature(*id);
            c.paths.push(f.path().clone());
            c.by_path.insert(f.path().clone(), i);
            c.parent.push(f.parent().map(|p| index[&p]));
            c.role.push(f.role());
            c.groups.push(
                f.child_groups()
                    .iter()
                    .map(|g| Group {
                        kind: g.kind(),
                        members: g.members().iter().map(|m| index[m]).collect(),
                    })
                    .collect(),
            );
        }
        for k in model.constraints() {
            let lhs = c.index_of(k.lhs.as_str())?;
            let rhs = c.index_of(k.rhs.as_str())?;
            c.constraints.push((k.kind, lhs, rhs));
        }
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn index_of(&self, path: &str) -> Result<usize, AnalysisError> {
        self.by_path
            .get(path)
            .copied()
            .ok_or_else(|| AnalysisError::UnknownPath(FeaturePath::new(path)))
    }

    /// Every selection rule and constraint holds for `sel`.
    pub fn is_valid(&self, sel: &[bool]) -> bool {
        if !sel[0] {
            return false;
        }
        for f in 0..self.len() {
            if !sel[f] {
                continue;
            }
            if let Some(p) = self.parent[f] {
                if !sel[p] {
                    return false;
                }
            }
            for g in &self.groups[f] {
                let on = g.members.iter().filter(|&&m| sel[m]).count();
                let ok = match g.kind {
                    GroupKind::And => g
                        .members
                        .iter()
                        .all(|&m| sel[m] || self.role[m] != Role::Mandatory),
                    GroupKind::Alternative => on == 1,
                    GroupKind::Or => on >= 1,
                };
                if !ok {
                    return false;
                }
            }
        }
        self.constraints.iter().all(|&(kind, a, b)| match kind {
            ConstraintKind::Requires => !sel[a] || sel[b],
            ConstraintKind::Excludes => !(sel[a] && sel[b]),
        })
    }
}
