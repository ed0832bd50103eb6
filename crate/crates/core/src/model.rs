//! Feature-model data structures, construction, structural validation and
//! path resolution.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Opaque handle of a feature inside one [`FeatureModel`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FeatureId(pub(crate) u32);

impl FeatureId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for FeatureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Dot-joined feature names from the root, e.g. `Architecture.Functional_A.S1`.
///
/// Cheap to clone; configurations hold many of these.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FeaturePath(Arc<str>);

impl FeaturePath {
    pub fn new(path: impl AsRef<str>) -> Self {
        FeaturePath(Arc::from(path.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn segments(&self) -> impl Iterator<Item = &str> {
        self.0.split('.')
    }

    /// Last segment: the feature's own name.
    pub fn leaf(&self) -> &str {
        self.0.rsplit('.').next().unwrap_or(&self.0)
    }

    pub fn depth(&self) -> usize {
        self.segments().count()
    }

    pub fn child(&self, name: &str) -> FeaturePath {
        FeaturePath::new(format!("{}.{}", self.0, name))
    }
}

impl fmt::Debug for FeaturePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&*self.0, f)
    }
}

impl fmt::Display for FeaturePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for FeaturePath {
    fn from(s: &str) -> Self {
        FeaturePath::new(s)
    }
}

impl std::borrow::Borrow<str> for FeaturePath {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for FeaturePath {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// `true` if `name` matches `[A-Za-z_][A-Za-z0-9_-]*`.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

/// Maps arbitrary text onto the identifier charset: every disallowed
/// character becomes `_`, and a leading digit or hyphen gets a `_` prefix.
pub fn sanitize_identifier(name: &str) -> String {
    let mut out: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect();
    if out.starts_with(|c: char| c.is_ascii_digit() || c == '-') {
        out.insert(0, '_');
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variability {
    Mandatory,
    Optional,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupKind {
    And,
    Alternative,
    Or,
}

impl GroupKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GroupKind::And => "and",
            GroupKind::Alternative => "alternative",
            GroupKind::Or => "or",
        }
    }
}

/// How a feature hangs off its parent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Root,
    Mandatory,
    Optional,
    Alternative,
    Or,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Root => "root",
            Role::Mandatory => "mandatory",
            Role::Optional => "optional",
            Role::Alternative => "alternative",
            Role::Or => "or",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One relation between a feature and a set of its children.
///
/// A feature owns at most one `And` group; `Alternative`/`Or` members carry
/// no mandatory/optional marker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChildGroup {
    And(Vec<(FeatureId, Variability)>),
    Alternative(Vec<FeatureId>),
    Or(Vec<FeatureId>),
}

impl ChildGroup {
    pub fn kind(&self) -> GroupKind {
        match self {
            ChildGroup::And(_) => GroupKind::And,
            ChildGroup::Alternative(_) => GroupKind::Alternative,
            ChildGroup::Or(_) => GroupKind::Or,
        }
    }

    pub fn members(&self) -> Vec<FeatureId> {
        match self {
            ChildGroup::And(c) => c.iter().map(|(id, _)| *id).collect(),
            ChildGroup::Alternative(c) | ChildGroup::Or(c) => c.clone(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            ChildGroup::And(c) => c.len(),
            ChildGroup::Alternative(c) | ChildGroup::Or(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn remove_member(&mut self, id: FeatureId) {
        match self {
            ChildGroup::And(c) => c.retain(|(m, _)| *m != id),
            ChildGroup::Alternative(c) | ChildGroup::Or(c) => c.retain(|m| *m != id),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Annotations {
    pub full_name: Option<String>,
    pub description: Option<String>,
}

impl Annotations {
    pub fn new(full_name: impl Into<String>, description: impl Into<String>) -> Self {
        Annotations {
            full_name: Some(full_name.into()),
            description: Some(description.into()),
        }
    }

    pub fn full_name(full_name: impl Into<String>) -> Self {
        Annotations {
            full_name: Some(full_name.into()),
            description: None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.full_name.is_none() && self.description.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct Feature {
    id: FeatureId,
    name: String,
    path: FeaturePath,
    parent: Option<FeatureId>,
    role: Role,
    pub annotations: Annotations,
    child_groups: Vec<ChildGroup>,
}

impl Feature {
    pub fn id(&self) -> FeatureId {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn path(&self) -> &FeaturePath {
        &self.path
    }

    pub fn parent(&self) -> Option<FeatureId> {
        self.parent
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn child_groups(&self) -> &[ChildGroup] {
        &self.child_groups
    }

    /// All children, group by group, in insertion order.
    pub fn children(&self) -> impl Iterator<Item = FeatureId> + '_ {
        self.child_groups.iter().flat_map(|g| g.members())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstraintKind {
    Requires,
    Excludes,
}

impl ConstraintKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstraintKind::Requires => "requires",
            ConstraintKind::Excludes => "excludes",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossTreeConstraint {
    pub kind: ConstraintKind,
    pub lhs: FeaturePath,
    pub rhs: FeaturePath,
}

impl fmt::Display for CrossTreeConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.kind.as_str(), self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("model name is empty")]
    EmptyName,
    #[error("unknown parent feature `{0}`")]
    UnknownParent(FeaturePath),
    #[error("`{parent}` already has a child named `{name}`")]
    DuplicateSibling { parent: FeaturePath, name: String },
    #[error("`{0}` is not a valid identifier")]
    BadIdentifier(String),
    #[error("group under `{parent}` has {size} member(s), needs at least 2")]
    GroupTooSmall { parent: FeaturePath, size: usize },
    #[error("constraint endpoint `{0}` does not resolve")]
    DanglingConstraint(FeaturePath),
    #[error("constraint relates `{0}` to itself")]
    SelfConstraint(FeaturePath),
    #[error("unknown feature path `{0}`")]
    UnknownPath(FeaturePath),
}

impl ModelError {
    /// Structural violation code for construction failures that have one.
    pub fn violation_code(&self) -> Option<ViolationCode> {
        Some(match self {
            ModelError::DuplicateSibling { .. } => ViolationCode::DuplicateSibling,
            ModelError::BadIdentifier(_) => ViolationCode::BadIdentifier,
            ModelError::GroupTooSmall { .. } => ViolationCode::GroupTooSmall,
            ModelError::DanglingConstraint(_) => ViolationCode::DanglingConstraint,
            ModelError::SelfConstraint(_) => ViolationCode::SelfConstraint,
            _ => return None,
        })
    }

    /// The feature the error is about, when there is one.
    pub fn subject(&self) -> Option<FeaturePath> {
        match self {
            ModelError::EmptyName => None,
            ModelError::UnknownParent(p)
            | ModelError::DanglingConstraint(p)
            | ModelError::SelfConstraint(p)
            | ModelError::UnknownPath(p) => Some(p.clone()),
            ModelError::DuplicateSibling { parent, name } => Some(parent.child(name)),
            ModelError::GroupTooSmall { parent, .. } => Some(parent.clone()),
            ModelError::BadIdentifier(name) => Some(FeaturePath::new(name)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationCode {
    DuplicateSibling,
    EmptyGroup,
    GroupTooSmall,
    DanglingConstraint,
    SelfConstraint,
    BadIdentifier,
}

impl ViolationCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationCode::DuplicateSibling => "DuplicateSibling",
            ViolationCode::EmptyGroup => "EmptyGroup",
            ViolationCode::GroupTooSmall => "GroupTooSmall",
            ViolationCode::DanglingConstraint => "DanglingConstraint",
            ViolationCode::SelfConstraint => "SelfConstraint",
            ViolationCode::BadIdentifier => "BadIdentifier",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureViolation {
    pub code: ViolationCode,
    pub path: FeaturePath,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureReport {
    pub violations: Vec<StructureViolation>,
}

impl StructureReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, code: ViolationCode) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModelStats {
    pub feature_count: usize,
    pub max_depth: usize,
    pub and_groups: usize,
    pub alternative_groups: usize,
    pub or_groups: usize,
    pub mandatory: usize,
    pub optional: usize,
    pub alternative_members: usize,
    pub or_members: usize,
    pub constraint_count: usize,
}

impl ModelStats {
    /// Features whose selection is a free choice once their parent is in:
    /// optional children plus every alternative/or member.
    pub fn decision_points(&self) -> usize {
        self.optional + self.alternative_members + self.or_members
    }
}

/// A named, rooted feature tree plus cross-tree constraints.
#[derive(Clone, Debug)]
pub struct FeatureModel {
    name: String,
    root: FeatureId,
    features: BTreeMap<FeatureId, Feature>,
    by_path: HashMap<FeaturePath, FeatureId>,
    constraints: Vec<CrossTreeConstraint>,
    next_id: u32,
}

impl FeatureModel {
    /// A model whose root feature is a sanitized form of `name`.
    pub fn new(name: &str) -> Result<Self, ModelError> {
        if name.is_empty() {
            return Err(ModelError::EmptyName);
        }
        Self::with_root(name, &sanitize_identifier(name), Annotations::default())
    }

    pub fn with_root(
        name: &str,
        root_name: &str,
        annotations: Annotations,
    ) -> Result<Self, ModelError> {
        if name.is_empty() {
            return Err(ModelError::EmptyName);
        }
        if !is_identifier(root_name) {
            return Err(ModelError::BadIdentifier(root_name.to_string()));
        }
        let root = FeatureId(0);
        let path = FeaturePath::new(root_name);
        let feature = Feature {
            id: root,
            name: root_name.to_string(),
            path: path.clone(),
            parent: None,
            role: Role::Root,
            annotations,
            child_groups: Vec::new(),
        };
        Ok(FeatureModel {
            name: name.to_string(),
            root,
            features: BTreeMap::from([(root, feature)]),
            by_path: HashMap::from([(path, root)]),
            constraints: Vec::new(),
            next_id: 1,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn root(&self) -> FeatureId {
        self.root
    }

    pub fn root_feature(&self) -> &Feature {
        &self.features[&self.root]
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn feature(&self, id: FeatureId) -> &Feature {
        &self.features[&id]
    }

    pub fn get(&self, id: FeatureId) -> Option<&Feature> {
        self.features.get(&id)
    }

    pub fn feature_mut(&mut self, id: FeatureId) -> &mut Feature {
        self.features
            .get_mut(&id)
            .expect("feature id from this model")
    }

    /// Features in id order.
    pub fn features(&self) -> impl Iterator<Item = &Feature> {
        self.features.values()
    }

    pub fn constraints(&self) -> &[CrossTreeConstraint] {
        &self.constraints
    }

    pub fn resolve_path(&self, path: &str) -> Result<FeatureId, ModelError> {
        self.lookup(path)
            .ok_or_else(|| ModelError::UnknownPath(FeaturePath::new(path)))
    }

    pub fn lookup(&self, path: &str) -> Option<FeatureId> {
        self.by_path.get(path).copied()
    }

    pub fn by_path(&self, path: &str) -> Option<&Feature> {
        self.lookup(path).map(|id| self.feature(id))
    }

    /// Depth-first, parent before children, groups and members in order.
    pub fn preorder(&self) -> Vec<FeatureId> {
        let mut out = Vec::with_capacity(self.features.len());
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            out.push(id);
            let Some(f) = self.features.get(&id) else {
                continue;
            };
            let children: Vec<_> = f.children().collect();
            stack.extend(children.into_iter().rev());
        }
        out
    }

    fn check_new_child(&self, parent: FeatureId, name: &str) -> Result<(), ModelError> {
        if !is_identifier(name) {
            return Err(ModelError::BadIdentifier(name.to_string()));
        }
        let p = self.feature(parent);
        if p.children().any(|c| self.feature(c).name == name) {
            return Err(ModelError::DuplicateSibling {
                parent: p.path.clone(),
                name: name.to_string(),
            });
        }
        Ok(())
    }

    fn insert_child(
        &mut self,
        parent: FeatureId,
        name: &str,
        role: Role,
        annotations: Annotations,
    ) -> FeatureId {
        let id = FeatureId(self.next_id);
        self.next_id += 1;
        let path = self.feature(parent).path.child(name);
        self.by_path.insert(path.clone(), id);
        self.features.insert(
            id,
            Feature {
                id,
                name: name.to_string(),
                path,
                parent: Some(parent),
                role,
                annotations,
                child_groups: Vec::new(),
            },
        );
        id
    }

    /// Appends a child to `parent`'s And-group, creating the group if needed.
    pub fn add_feature(
        &mut self,
        parent: &str,
        name: &str,
        variability: Variability,
        annotations: Annotations,
    ) -> Result<FeatureId, ModelError> {
        let parent_id = self
            .lookup(parent)
            .ok_or_else(|| ModelError::UnknownParent(FeaturePath::new(parent)))?;
        self.check_new_child(parent_id, name)?;
        let role = match variability {
            Variability::Mandatory => Role::Mandatory,
            Variability::Optional => Role::Optional,
        };
        let id = self.insert_child(parent_id, name, role, annotations);
        let groups = &mut self.feature_mut(parent_id).child_groups;
        match groups.iter_mut().find_map(|g| match g {
            ChildGroup::And(c) => Some(c),
            _ => None,
        }) {
            Some(and) => and.push((id, variability)),
            None => groups.push(ChildGroup::And(vec![(id, variability)])),
        }
        Ok(id)
    }

    /// Adds one Alternative or Or group of fresh leaf children under `parent`.
    pub fn add_group(
        &mut self,
        parent: &str,
        kind: GroupKind,
        child_names: &[&str],
    ) -> Result<Vec<FeatureId>, ModelError> {
        let annotated: Vec<_> = child_names
            .iter()
            .map(|n| (*n, Annotations::default()))
            .collect();
        self.add_group_annotated(parent, kind, &annotated)
    }

    pub fn add_group_annotated(
        &mut self,
        parent: &str,
        kind: GroupKind,
        children: &[(&str, Annotations)],
    ) -> Result<Vec<FeatureId>, ModelError> {
        assert!(
            kind != GroupKind::And,
            "And-children are added with add_feature"
        );
        let parent_id = self
            .lookup(parent)
            .ok_or_else(|| ModelError::UnknownParent(FeaturePath::new(parent)))?;
        if children.len() < 2 {
            return Err(ModelError::GroupTooSmall {
                parent: self.feature(parent_id).path.clone(),
                size: children.len(),
            });
        }
        for (i, (name, _)) in children.iter().enumerate() {
            self.check_new_child(parent_id, name)?;
            if children[..i].iter().any(|(n, _)| n == name) {
                return Err(ModelError::DuplicateSibling {
                    parent: self.feature(parent_id).path.clone(),
                    name: name.to_string(),
                });
            }
        }
        let role = match kind {
            GroupKind::Alternative => Role::Alternative,
            _ => Role::Or,
        };
        let ids: Vec<_> = children
            .iter()
            .map(|(name, ann)| self.insert_child(parent_id, name, role, ann.clone()))
            .collect();
        let group = match kind {
            GroupKind::Alternative => ChildGroup::Alternative(ids.clone()),
            _ => ChildGroup::Or(ids.clone()),
        };
        self.feature_mut(parent_id).child_groups.push(group);
        Ok(ids)
    }

    pub fn add_constraint(
        &mut self,
        kind: ConstraintKind,
        lhs: &str,
        rhs: &str,
    ) -> Result<(), ModelError> {
        for p in [lhs, rhs] {
            if self.lookup(p).is_none() {
                return Err(ModelError::DanglingConstraint(FeaturePath::new(p)));
            }
        }
        if lhs == rhs {
            return Err(ModelError::SelfConstraint(FeaturePath::new(lhs)));
        }
        self.constraints.push(CrossTreeConstraint {
            kind,
            lhs: FeaturePath::new(lhs),
            rhs: FeaturePath::new(rhs),
        });
        Ok(())
    }

    pub fn validate_structure(&self) -> StructureReport {
        let mut violations = Vec::new();
        let mut push = |code, path: &FeaturePath, message: String| {
            violations.push(StructureViolation {
                code,
                path: path.clone(),
                message,
            })
        };
        for f in self.features.values() {
            if !is_identifier(&f.name) {
                push(
                    ViolationCode::BadIdentifier,
                    &f.path,
                    format!("`{}` is not a valid identifier", f.name),
                );
            }
            let mut seen = BTreeSet::new();
            for c in f.children() {
                let Some(child) = self.features.get(&c) else {
                    continue;
                };
                if !seen.insert(child.name.as_str()) {
                    push(
                        ViolationCode::DuplicateSibling,
                        &child.path,
                        format!(
                            "`{}` has more than one child named `{}`",
                            f.path, child.name
                        ),
                    );
                }
            }
            for (i, g) in f.child_groups.iter().enumerate() {
                if g.is_empty() {
                    push(
                        ViolationCode::EmptyGroup,
                        &f.path,
                        format!("group {} ({}) has no members", i + 1, g.kind().as_str()),
                    );
                } else if g.kind() != GroupKind::And && g.len() < 2 {
                    push(
                        ViolationCode::GroupTooSmall,
                        &f.path,
                        format!(
                            "group {} ({}) has {} member, needs at least 2",
                            i + 1,
                            g.kind().as_str(),
                            g.len()
                        ),
                    );
                }
            }
        }
        for c in &self.constraints {
            for p in [&c.lhs, &c.rhs] {
                if self.lookup(p.as_str()).is_none() {
                    push(
                        ViolationCode::DanglingConstraint,
                        p,
                        format!("constraint `{c}` refers to a missing feature"),
                    );
                }
            }
            if c.lhs == c.rhs {
                push(
                    ViolationCode::SelfConstraint,
                    &c.lhs,
                    format!("constraint `{c}` relates a feature to itself"),
                );
            }
        }
        StructureReport { violations }
    }

    pub fn stats(&self) -> ModelStats {
        let mut s = ModelStats {
            feature_count: self.features.len(),
            constraint_count: self.constraints.len(),
            ..ModelStats::default()
        };
        for f in self.features.values() {
            s.max_depth = s.max_depth.max(f.path.depth());
            match f.role {
                Role::Root => {}
                Role::Mandatory => s.mandatory += 1,
                Role::Optional => s.optional += 1,
                Role::Alternative => s.alternative_members += 1,
                Role::Or => s.or_members += 1,
            }
            for g in &f.child_groups {
                match g.kind() {
                    GroupKind::And => s.and_groups += 1,
                    GroupKind::Alternative => s.alternative_groups += 1,
                    GroupKind::Or => s.or_groups += 1,
                }
            }
        }
        s
    }

    /// Same name, same tree (names, roles, group kinds, member order,
    /// annotations) and same constraints in order. Feature ids are ignored.
    pub fn structurally_eq(&self, other: &FeatureModel) -> bool {
        fn same(a: &FeatureModel, fa: FeatureId, b: &FeatureModel, fb: FeatureId) -> bool {
            let (x, y) = (a.feature(fa), b.feature(fb));
            if x.name != y.name
                || x.role != y.role
                || x.annotations != y.annotations
                || x.child_groups.len() != y.child_groups.len()
            {
                return false;
            }
            x.child_groups.iter().zip(&y.child_groups).all(|(g, h)| {
                g.kind() == h.kind()
                    && g.len() == h.len()
                    && g.members()
                        .into_iter()
                        .zip(h.members())
                        .all(|(c, d)| same(a, c, b, d))
            })
        }
        self.name == other.name
            && self.constraints == other.constraints
            && same(self, self.root, other, other.root)
    }

    /// Direct structural access for tests that need to build invalid models.
    #[doc(hidden)]
    pub fn groups_mut_unchecked(&mut self, id: FeatureId) -> &mut Vec<ChildGroup> {
        &mut self.feature_mut(id).child_groups
    }

    /// Removes a feature and its subtree without touching constraints.
    #[doc(hidden)]
    pub fn remove_subtree_unchecked(&mut self, path: &str) -> Option<()> {
        let id = self.lookup(path)?;
        let parent = self.feature(id).parent?;
        for g in &mut self.feature_mut(parent).child_groups {
            g.remove_member(id);
        }
        let mut stack = vec![id];
        while let Some(cur) = stack.pop() {
            if let Some(f) = self.features.remove(&cur) {
                self.by_path.remove(&f.path);
                stack.extend(f.children());
            }
        }
        Some(())
    }

    #[doc(hidden)]
    pub fn constraints_mut_unchecked(&mut self) -> &mut Vec<CrossTreeConstraint> {
        &mut self.constraints
    }
}
