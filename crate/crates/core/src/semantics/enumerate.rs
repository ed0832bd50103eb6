use crate::model::{ConstraintKind, FeatureModel, Role};

use super::compiled::Compiled;
use super::{AnalysisError, Configuration};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub configurations: Vec<Configuration>,
    /// More valid configurations exist beyond the returned ones.
    pub truncated: bool,
}

struct Search<'a> {
    c: &'a Compiled,
    /// Feature indices sorted by path text.
    order: Vec<usize>,
    sel: Vec<bool>,
    limit: usize,
    out: Vec<Configuration>,
    truncated: bool,
}

impl Search<'_> {
    fn forced_in(&self, f: usize) -> bool {
        match self.c.parent[f] {
            None => true,
            Some(p) => {
                (self.sel[p] && self.c.role[f] == Role::Mandatory)
                    || self
                        .c
                        .constraints
                        .iter()
                        .any(|&(k, a, b)| k == ConstraintKind::Requires && b == f && self.sel[a])
            }
        }
    }

    fn selectable(&self, f: usize) -> bool {
        let Some(p) = self.c.parent[f] else {
            return true;
        };
        if !self.sel[p] {
            return false;
        }
        if self.c.role[f] == Role::Alternative {
            let taken = self.c.groups[p]
                .iter()
                .find(|g| g.members.contains(&f))
                .is_some_and(|g| g.members.iter().any(|&m| self.sel[m]));
            if taken {
                return false;
            }
        }
        !self.c.constraints.iter().any(|&(k, a, b)| {
            k == ConstraintKind::Excludes && ((a == f && self.sel[b]) || (b == f && self.sel[a]))
        })
    }

    /// Emits, in lexicographic order, every valid configuration that agrees
    /// with the current selection on `order[..from]`. Returns `false` once
    /// the limit is exceeded.
    fn run(&mut self, from: usize) -> bool {
        if self.c.is_valid(&self.sel) {
            if self.out.len() == self.limit {
                self.truncated = true;
                return false;
            }
            self.out.push(
                self.order
                    .iter()
                    .filter(|&&f| self.sel[f])
                    .map(|&f| self.c.paths[f].clone())
                    .collect(),
            );
        }
        for j in from..self.order.len() {
            let f = self.order[j];
            if self.selectable(f) {
                self.sel[f] = true;
                let go_on = self.run(j + 1);
                self.sel[f] = false;
                if !go_on {
                    return false;
                }
            }
            // every later branch leaves f out
            if self.forced_in(f) {
                break;
            }
        }
        true
    }
}

/// All valid configurations, ordered lexicographically by their sorted path
/// lists, cut off after `limit`.
///
/// Backtracking search over features in path order. Parents sort before
/// their children, so a feature's parent is decided before the feature is.
pub fn enumerate_configurations(
    model: &FeatureModel,
    limit: usize,
) -> Result<Enumeration, AnalysisError> {
    let c = Compiled::new(model)?;
    let mut order: Vec<usize> = (0..c.len()).collect();
    order.sort_by(|&a, &b| c.paths[a].cmp(&c.paths[b]));
    let mut s = Search {
        c: &c,
        order,
        sel: vec![false; c.len()],
        limit,
        out: Vec::new(),
        truncated: false,
    };
    s.run(0);
    Ok(Enumeration {
        configurations: s.out,
        truncated: s.truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_model;

    fn cfgs(e: &Enumeration) -> Vec<Vec<&str>> {
        e.configurations
            .iter()
            .map(|c| c.iter().map(|p| p.as_str()).collect())
            .collect()
    }

    #[test]
    fn root_only() {
        let m = parse_model("model \"M\" { feature R }").unwrap();
        let e = enumerate_configurations(&m, 10).unwrap();
        assert_eq!(cfgs(&e), vec![vec!["R"]]);
        assert!(!e.truncated);
    }

    // Hand-enumerated over all 16 subsets of {A, B, C, D}: A is forced, so
    // exactly one of C/D with B free gives four products.
    #[test]
    fn alt_under_mandatory() {
        let src = "model \"M\" { feature R { mandatory feature A { alt { feature C feature D } } optional feature B } }";
        let m = parse_model(src).unwrap();
        let e = enumerate_configurations(&m, 100).unwrap();
        assert_eq!(
            cfgs(&e),
            vec![
                vec!["R", "R.A", "R.A.C"],
                vec!["R", "R.A", "R.A.C", "R.B"],
                vec!["R", "R.A", "R.A.D"],
                vec!["R", "R.A", "R.A.D", "R.B"],
            ]
        );

        let src = "model \"M\" { feature R { mandatory feature A { alt { feature C feature D } } optional feature B } constraints { R.B requires R.A.C } }";
        let m = parse_model(src).unwrap();
        let e = enumerate_configurations(&m, 100).unwrap();
        assert_eq!(
            cfgs(&e),
            vec![
                vec!["R", "R.A", "R.A.C"],
                vec!["R", "R.A", "R.A.C", "R.B"],
                vec!["R", "R.A", "R.A.D"],
            ]
        );
    }

    #[test]
    fn truncation_is_a_prefix() {
        let src = "model \"M\" { feature R { feature A feature B feature C or { feature X feature Y } } }";
        let m = parse_model(src).unwrap();
        let all = enumerate_configurations(&m, usize::MAX).unwrap();
        assert_eq!(all.configurations.len(), 8 * 3);
        assert!(all.configurations.windows(2).all(|w| w[0] < w[1]));
        let some = enumerate_configurations(&m, 5).unwrap();
        assert!(some.truncated);
        assert_eq!(some.configurations, all.configurations[..5]);
        let exact = enumerate_configurations(&m, 24).unwrap();
        assert!(!exact.truncated);
    }

    #[test]
    fn hyphen_sorts_before_dot() {
        // "R.A-b" < "R.A.C": path order is not preorder
        let src = "model \"M\" { feature R { optional feature A { mandatory feature C } optional feature A-b } }";
        let m = parse_model(src).unwrap();
        let e = enumerate_configurations(&m, 100).unwrap();
        assert_eq!(e.configurations.len(), 4);
        assert!(e.configurations.windows(2).all(|w| w[0] < w[1]));
    }
}
