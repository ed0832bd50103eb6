use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::model::{FeatureModel, FeaturePath, Role};
use crate::ConfigCount;

use super::compiled::Compiled;
use super::count::{check_bound, constrained_count, Force};
use super::{AnalysisError, DEFAULT_COUNT_BOUND};

/// Commonality (core) and variability (everything else) of one model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisReport {
    /// In every valid configuration. Empty for a void model.
    pub core: BTreeSet<FeaturePath>,
    /// In no valid configuration.
    pub dead: BTreeSet<FeaturePath>,
    /// Marked optional yet in every valid configuration.
    pub false_optional: BTreeSet<FeaturePath>,
    pub total_valid_configurations: ConfigCount,
}

impl AnalysisReport {
    /// No valid configuration exists.
    pub fn is_void(&self) -> bool {
        self.total_valid_configurations.is_zero()
    }
}

pub fn analyze(model: &FeatureModel) -> Result<AnalysisReport, AnalysisError> {
    analyze_with_bound(model, DEFAULT_COUNT_BOUND)
}

/// Counts, per feature, the configurations containing it and compares
/// against the total.
pub fn analyze_with_bound(
    model: &FeatureModel,
    bound: usize,
) -> Result<AnalysisReport, AnalysisError> {
    check_bound(model, bound)?;
    let c = Compiled::new(model)?;
    let mut force = vec![Force::Free; c.len()];
    let total: BigUint = constrained_count(&c, &force);

    let mut report = AnalysisReport {
        core: BTreeSet::new(),
        dead: BTreeSet::new(),
        false_optional: BTreeSet::new(),
        total_valid_configurations: total.clone(),
    };
    for f in 0..c.len() {
        let with_f: BigUint = if total.is_zero() {
            BigUint::zero()
        } else {
            force[f] = Force::In;
            let n = constrained_count(&c, &force);
            force[f] = Force::Free;
            n
        };
        if with_f.is_zero() {
            report.dead.insert(c.paths[f].clone());
        } else if with_f == total {
            report.core.insert(c.paths[f].clone());
            if c.role[f] == Role::Optional {
                report.false_optional.insert(c.paths[f].clone());
            }
        }
    }
    Ok(report)
}

pub fn core_features(model: &FeatureModel) -> Result<BTreeSet<FeaturePath>, AnalysisError> {
    analyze(model).map(|r| r.core)
}

pub fn dead_features(model: &FeatureModel) -> Result<BTreeSet<FeaturePath>, AnalysisError> {
    analyze(model).map(|r| r.dead)
}

pub fn false_optional_features(
    model: &FeatureModel,
) -> Result<BTreeSet<FeaturePath>, AnalysisError> {
    analyze(model).map(|r| r.false_optional)
}
