//! Feature models for cellular network technologies.
//!
//! - [`model`]: the feature tree, cross-tree constraints and structural checks
//! - [`dsl`]: the `.fm` text format
//! - [`semantics`]: validity, enumeration, counting, analysis, propagation
//! - [`compare`]: commonality between two models
//! - [`ontology`]: class-model export (`.fmx`, `.dot`)
//! - [`corpus`]: embedded reference models

pub mod compare;
pub mod corpus;
pub mod dsl;
pub mod model;
pub mod num;
pub mod ontology;
pub mod semantics;
#[cfg(feature = "testkit")]
pub mod testkit;

pub use compare::{compare_models, ComparisonReport, NameMap};
pub use dsl::{parse_model, serialize_model, ParseError};
pub use model::{FeatureModel, FeaturePath, ModelError};
pub use ontology::{emit_dot, emit_fmx, to_ontology, OntologyModel};
pub use semantics::{AnalysisError, AnalysisReport, Configuration};

/// Exact configuration count.
pub type ConfigCount = num_bigint::BigUint;
/// Share of matched features in a comparison.
pub type CommonalityIndex = num_rational::Ratio<u64>;
