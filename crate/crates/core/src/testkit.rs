//! Seeded random models and a brute-force configuration oracle.
//!
//! The oracle shares no code with [`crate::semantics`]: it walks every
//! subset of features as a bitmask and checks the selection rules directly.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

use crate::model::{
    Annotations, ChildGroup, ConstraintKind, FeatureModel, FeaturePath, GroupKind, Role,
    Variability,
};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape limits for [`random_model`].
#[derive(Clone, Copy, Debug)]
pub struct GenParams {
    pub max_features: usize,
    pub max_constraints: usize,
    /// Probability that a feature carries annotations.
    pub annotation_rate: f64,
}

impl GenParams {
    pub fn new(max_features: usize, max_constraints: usize) -> Self {
        GenParams {
            max_features,
            max_constraints,
            annotation_rate: 0.3,
        }
    }

    pub fn constraint_free(max_features: usize) -> Self {
        Self::new(max_features, 0)
    }
}

/// Small pool so that leaf names repeat across subtrees and models.
const NAMES: [&str; 12] = [
    "A", "B", "C", "D", "E", "MME", "HSS", "PDCP", "MAC", "X", "Y", "Z",
];

const TEXTS: [&str; 6] = [
    "plain",
    "with \"quotes\"",
    "back\\slash",
    "two\nlines",
    "ünïcødé",
    "",
];

#[derive(Clone, Copy)]
enum Slot {
    Mandatory,
    Optional,
    Group(usize),
}

/// A structurally valid model with between 1 and `max_features` features
/// and at most `max_constraints` constraints.
pub fn random_model(rng: &mut TestRng, p: GenParams) -> FeatureModel {
    let n = rng.gen_range(1..=p.max_features.max(1));
    let mut kids: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 1..n {
        kids[rng.gen_range(0..i)].push(i);
    }

    let mut names = vec![String::new(); n];
    names[0] = "Root".to_string();
    for list in &kids {
        let mut pool: Vec<&str> = NAMES.to_vec();
        pool.shuffle(rng);
        for (k, &c) in list.iter().enumerate() {
            names[c] = match pool.get(k) {
                Some(s) => s.to_string(),
                None => format!("F{c}"),
            };
        }
    }

    let mut model = FeatureModel::with_root("Random", "Root", annotation(rng, p)).unwrap();
    let mut paths = vec![FeaturePath::new("Root"); n];
    let mut stack = vec![0usize];
    while let Some(f) = stack.pop() {
        let list = &kids[f];
        let n_groups = rng.gen_range(0..=list.len() / 2);
        let kinds: Vec<GroupKind> = (0..n_groups)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    GroupKind::Alternative
                } else {
                    GroupKind::Or
                }
            })
            .collect();
        let mut slots: Vec<Slot> = list
            .iter()
            .map(|_| match rng.gen_range(0..4) {
                0 => Slot::Mandatory,
                1 => Slot::Optional,
                _ if n_groups > 0 => Slot::Group(rng.gen_range(0..n_groups)),
                _ => Slot::Optional,
            })
            .collect();
        // groups below two members dissolve into optional children
        for g in 0..n_groups {
            let members = slots
                .iter()
                .filter(|s| matches!(s, Slot::Group(x) if *x == g))
                .count();
            if members < 2 {
                for s in slots.iter_mut() {
                    if matches!(s, Slot::Group(x) if *x == g) {
                        *s = Slot::Optional;
                    }
                }
            }
        }

        let pf = paths[f].clone();
        // emit And-children and groups interleaved in first-member order
        let mut emitted = vec![false; n_groups];
        for (k, &c) in list.iter().enumerate() {
            match slots[k] {
                Slot::Mandatory | Slot::Optional => {
                    let v = if matches!(slots[k], Slot::Mandatory) {
                        Variability::Mandatory
                    } else {
                        Variability::Optional
                    };
                    let ann = annotation(rng, p);
                    model.add_feature(pf.as_str(), &names[c], v, ann).unwrap();
                }
                Slot::Group(g) if !emitted[g] => {
                    emitted[g] = true;
                    let members: Vec<(&str, Annotations)> = list
                        .iter()
                        .zip(&slots)
                        .filter(|(_, s)| matches!(s, Slot::Group(x) if *x == g))
                        .map(|(&m, _)| (names[m].as_str(), annotation(rng, p)))
                        .collect();
                    model
                        .add_group_annotated(pf.as_str(), kinds[g], &members)
                        .unwrap();
                }
                Slot::Group(_) => {}
            }
            paths[c] = pf.child(&names[c]);
        }
        stack.extend(list.iter().rev().copied());
    }

    if n >= 2 {
        let k = rng.gen_range(0..=p.max_constraints);
        for _ in 0..k {
            let a = rng.gen_range(0..n);
            let mut b = rng.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            let kind = if rng.gen_bool(0.5) {
                ConstraintKind::Requires
            } else {
                ConstraintKind::Excludes
            };
            model
                .add_constraint(kind, paths[a].as_str(), paths[b].as_str())
                .unwrap();
        }
    }
    model
}

fn annotation(rng: &mut TestRng, p: GenParams) -> Annotations {
    if !rng.gen_bool(p.annotation_rate) {
        return Annotations::default();
    }
    let pick = |rng: &mut TestRng| {
        if rng.gen_bool(0.5) {
            Some(TEXTS.choose(rng).unwrap().to_string())
        } else {
            None
        }
    };
    Annotations {
        full_name: pick(rng),
        description: pick(rng),
    }
}

/// Random selection of existing paths, each kept with probability `rate`.
pub fn random_selection(rng: &mut TestRng, model: &FeatureModel, rate: f64) -> Vec<FeaturePath> {
    model
        .preorder()
        .into_iter()
        .filter(|_| rng.gen_bool(rate))
        .map(|id| model.feature(id).path().clone())
        .collect()
}

/// Bitmask brute force over all feature subsets (at most 25 features).
pub struct Oracle {
    paths: Vec<FeaturePath>,
    optional_marked: Vec<bool>,
    parent: Vec<Option<usize>>,
    mandatory_kids: Vec<u64>,
    groups: Vec<Vec<(GroupKind, u64)>>,
    constraints: Vec<(ConstraintKind, u64, u64)>,
}

pub const ORACLE_MAX_FEATURES: usize = 25;

impl Oracle {
    pub fn new(model: &FeatureModel) -> Oracle {
        let order = model.preorder();
        assert!(
            order.len() <= ORACLE_MAX_FEATURES,
            "oracle limited to 25 features"
        );
        let index = |id| order.iter().position(|&x| x == id).unwrap();
        let n = order.len();
        let mut o = Oracle {
            paths: Vec::with_capacity(n),
            optional_marked: Vec::with_capacity(n),
            parent: Vec::with_capacity(n),
            mandatory_kids: vec![0; n],
            groups: vec![Vec::new(); n],
            constraints: Vec::new(),
        };
        for (i, &id) in order.iter().enumerate() {
            let f = model.feature(id);
            o.paths.push(f.path().clone());
            o.optional_marked.push(f.role() == Role::Optional);
            o.parent.push(f.parent().map(index));
            for g in f.child_groups() {
                match g {
                    ChildGroup::And(cs) => {
                        for (c, v) in cs {
                            if *v == Variability::Mandatory {
                                o.mandatory_kids[i] |= 1 << index(*c);
                            }
                        }
                    }
                    ChildGroup::Alternative(cs) | ChildGroup::Or(cs) => {
                        let mask = cs.iter().fold(0u64, |m, c| m | 1 << index(*c));
                        o.groups[i].push((g.kind(), mask));
                    }
                }
            }
        }
        for c in model.constraints() {
            let a = index(model.lookup(c.lhs.as_str()).unwrap());
            let b = index(model.lookup(c.rhs.as_str()).unwrap());
            o.constraints.push((c.kind, 1 << a, 1 << b));
        }
        o
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Preorder paths; bit `i` of a mask is `paths()[i]`.
    pub fn paths(&self) -> &[FeaturePath] {
        &self.paths
    }

    pub fn is_valid(&self, sel: u64) -> bool {
        if sel & 1 == 0 {
            return false;
        }
        for i in 0..self.paths.len() {
            if sel >> i & 1 == 0 {
                continue;
            }
            if let Some(p) = self.parent[i] {
                if sel >> p & 1 == 0 {
                    return false;
                }
            }
            if sel & self.mandatory_kids[i] != self.mandatory_kids[i] {
                return false;
            }
            for &(kind, mask) in &self.groups[i] {
                let on = (sel & mask).count_ones();
                let ok = match kind {
                    GroupKind::Alternative => on == 1,
                    GroupKind::Or => on >= 1,
                    GroupKind::And => true,
                };
                if !ok {
                    return false;
                }
            }
        }
        self.constraints.iter().all(|&(kind, a, b)| match kind {
            ConstraintKind::Requires => sel & a == 0 || sel & b != 0,
            ConstraintKind::Excludes => sel & a == 0 || sel & b == 0,
        })
    }

    /// Every valid mask, ascending.
    pub fn valid_masks(&self) -> Vec<u64> {
        let n = self.paths.len();
        // bit 0 (the root) is always set
        (0..1u64 << (n - 1))
            .map(|rest| rest << 1 | 1)
            .filter(|&m| self.is_valid(m))
            .collect()
    }

    pub fn to_set(&self, mask: u64) -> BTreeSet<FeaturePath> {
        (0..self.paths.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.paths[i].clone())
            .collect()
    }

    pub fn solve(&self) -> OracleResult {
        let masks = self.valid_masks();
        let all = (1u64 << self.paths.len()) - 1;
        let (every, some) = masks.iter().fold((all, 0u64), |(e, s), &m| (e & m, s | m));
        let every = if masks.is_empty() { 0 } else { every };
        let mut configurations: Vec<_> = masks.iter().map(|&m| self.to_set(m)).collect();
        configurations.sort();
        OracleResult {
            count: masks.len() as u64,
            core: self.to_set(every),
            dead: self.to_set(all & !some),
            false_optional: (0..self.paths.len())
                .filter(|&i| self.optional_marked[i] && every >> i & 1 == 1)
                .map(|i| self.paths[i].clone())
                .collect(),
            configurations,
            masks,
        }
    }
}

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub count: u64,
    /// Sorted like [`crate::semantics::enumerate_configurations`] output.
    pub configurations: Vec<BTreeSet<FeaturePath>>,
    pub masks: Vec<u64>,
    pub core: BTreeSet<FeaturePath>,
    pub dead: BTreeSet<FeaturePath>,
    pub false_optional: BTreeSet<FeaturePath>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_respects_limits() {
        let mut r = rng(7);
        for _ in 0..300 {
            let m = random_model(&mut r, GenParams::new(20, 3));
            assert!((1..=20).contains(&m.len()));
            assert!(m.constraints().len() <= 3);
            assert!(m.validate_structure().ok());
        }
    }

    #[test]
    fn generator_is_deterministic() {
        let a = random_model(&mut rng(3), GenParams::new(15, 2));
        let b = random_model(&mut rng(3), GenParams::new(15, 2));
        assert!(a.structurally_eq(&b));
    }

    #[test]
    fn generator_covers_every_relation() {
        let mut r = rng(11);
        let mut seen = [false; 5];
        for _ in 0..200 {
            let s = random_model(&mut r, GenParams::new(20, 3)).stats();
            seen[0] |= s.mandatory > 0;
            seen[1] |= s.optional > 0;
            seen[2] |= s.alternative_groups > 0;
            seen[3] |= s.or_groups > 0;
            seen[4] |= s.constraint_count > 0;
        }
        assert_eq!(seen, [true; 5]);
    }

    #[test]
    fn oracle_on_hand_model() {
        // R{mandatory A{alt{C,D}} optional B}: 4 configurations
        let src = "model \"M\" { feature R { mandatory feature A { alt { feature C feature D } } optional feature B } }";
        let m = crate::dsl::parse_model(src).unwrap();
        let r = Oracle::new(&m).solve();
        assert_eq!(r.count, 4);
        let core: BTreeSet<_> = ["R", "R.A"].into_iter().map(FeaturePath::new).collect();
        assert_eq!(r.core, core);
        assert!(r.dead.is_empty());
    }
}
