use num_bigint::BigUint;

use crate::model::{ConstraintKind, FeatureModel, GroupKind, Role};
use crate::num::{from_bool, Tally};
use crate::ConfigCount;

use super::compiled::Compiled;
use super::{AnalysisError, DEFAULT_COUNT_BOUND};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Force {
    Free,
    In,
    Out,
}

/// Valid configurations of the bare tree (constraints ignored).
///
/// A leaf contributes 1. An and-group contributes the product over its
/// children of `N(c)` for mandatory and `N(c) + 1` for optional children, an
/// alternative group `Σ N(c)`, an or group `Π (N(c) + 1) − 1`; a feature
/// multiplies its groups' contributions.
pub fn count_by_tree_product<N: Tally>(model: &FeatureModel) -> N {
    fn n<N: Tally>(model: &FeatureModel, id: crate::model::FeatureId) -> N {
        let f = model.feature(id);
        let mut total = N::one();
        for g in f.child_groups() {
            let term = match g.kind() {
                GroupKind::And => g.members().into_iter().fold(N::one(), |acc, c| {
                    let nc = n::<N>(model, c);
                    let nc = if model.feature(c).role() == Role::Mandatory {
                        nc
                    } else {
                        nc + N::one()
                    };
                    acc * nc
                }),
                GroupKind::Alternative => g
                    .members()
                    .into_iter()
                    .fold(N::zero(), |acc, c| acc + n::<N>(model, c)),
                GroupKind::Or => {
                    g.members()
                        .into_iter()
                        .fold(N::one(), |acc, c| acc * (n::<N>(model, c) + N::one()))
                        - N::one()
                }
            };
            total = total * term;
        }
        total
    }
    n(model, model.root())
}

/// Counts configurations of the tree under per-feature forcing. Constraints
/// are not looked at; callers fix every constraint endpoint first.
pub(crate) fn forced_tree_count<N: Tally>(c: &Compiled, force: &[Force]) -> N {
    let len = c.len();
    let mut has_forced_in = vec![false; len];
    let mut sel: Vec<N> = vec![N::zero(); len];
    for f in (0..len).rev() {
        has_forced_in[f] |= force[f] == Force::In;
        if let Some(p) = c.parent[f] {
            has_forced_in[p] |= has_forced_in[f];
        }
        if force[f] == Force::Out {
            continue;
        }
        let mut ways = N::one();
        for g in &c.groups[f] {
            let out = |m: usize| !has_forced_in[m];
            let term = match g.kind {
                GroupKind::And => g.members.iter().fold(N::one(), |acc, &m| {
                    if c.role[m] == Role::Mandatory {
                        acc * sel[m].clone()
                    } else {
                        acc * (sel[m].clone() + from_bool::<N>(out(m)))
                    }
                }),
                GroupKind::Alternative => {
                    let pinned: Vec<_> = g.members.iter().filter(|&&m| !out(m)).collect();
                    match pinned.as_slice() {
                        [] => g
                            .members
                            .iter()
                            .fold(N::zero(), |acc, &m| acc + sel[m].clone()),
                        [only] => sel[**only].clone(),
                        _ => N::zero(),
                    }
                }
                GroupKind::Or => {
                    let all = g.members.iter().fold(N::one(), |acc, &m| {
                        acc * (sel[m].clone() + from_bool::<N>(out(m)))
                    });
                    let none = from_bool::<N>(g.members.iter().all(|&m| out(m)));
                    all - none
                }
            };
            ways = ways * term;
        }
        sel[f] = ways;
    }
    sel.swap_remove(0)
}

/// Sums [`forced_tree_count`] over every assignment of the constraint
/// endpoints that satisfies all constraints and agrees with `base`.
pub(crate) fn constrained_count<N: Tally>(c: &Compiled, base: &[Force]) -> N {
    let mut endpoints: Vec<usize> = c.constraints.iter().flat_map(|&(_, a, b)| [a, b]).collect();
    endpoints.sort_unstable();
    endpoints.dedup();

    fn go<N: Tally>(c: &Compiled, endpoints: &[usize], k: usize, force: &mut Vec<Force>) -> N {
        let violated = c.constraints.iter().any(|&(kind, a, b)| match kind {
            ConstraintKind::Requires => force[a] == Force::In && force[b] == Force::Out,
            ConstraintKind::Excludes => force[a] == Force::In && force[b] == Force::In,
        });
        if violated {
            return N::zero();
        }
        let Some(&f) = endpoints.get(k) else {
            return forced_tree_count(c, force);
        };
        if force[f] != Force::Free {
            return go(c, endpoints, k + 1, force);
        }
        let mut total = N::zero();
        for choice in [Force::In, Force::Out] {
            force[f] = choice;
            total = total + go::<N>(c, endpoints, k + 1, force);
        }
        force[f] = Force::Free;
        total
    }

    let mut force = base.to_vec();
    go(c, &endpoints, 0, &mut force)
}

pub(crate) fn check_bound(model: &FeatureModel, bound: usize) -> Result<(), AnalysisError> {
    let decision_points = model.stats().decision_points();
    if !model.constraints().is_empty() && decision_points > bound {
        return Err(AnalysisError::CountTooLarge {
            decision_points,
            bound,
        });
    }
    Ok(())
}

/// Exact count in any [`Tally`] scalar.
pub fn count_as<N: Tally>(model: &FeatureModel, bound: usize) -> Result<N, AnalysisError> {
    if model.constraints().is_empty() {
        return Ok(count_by_tree_product(model));
    }
    check_bound(model, bound)?;
    let c = Compiled::new(model)?;
    Ok(constrained_count(&c, &vec![Force::Free; c.len()]))
}

/// Exact number of valid configurations.
///
/// Constraint-free models use the tree product. Otherwise every assignment
/// of the constraint endpoints that satisfies the constraints is counted
/// with those features pinned. Constrained models with more than
/// [`DEFAULT_COUNT_BOUND`] decision points are refused.
pub fn count_configurations(model: &FeatureModel) -> Result<ConfigCount, AnalysisError> {
    count_configurations_with_bound(model, DEFAULT_COUNT_BOUND)
}

pub fn count_configurations_with_bound(
    model: &FeatureModel,
    bound: usize,
) -> Result<ConfigCount, AnalysisError> {
    count_as::<BigUint>(model, bound)
}
