//! Text and JSON renderings. JSON objects are emitted with sorted keys.

use std::fmt::Write as _;
use std::path::Path;

use fmkit::compare::ComparisonReport;
use fmkit::model::{FeatureModel, FeaturePath, ModelStats, StructureReport};
use fmkit::ontology::{OntologyModel, RelationKind};
use fmkit::semantics::{AnalysisReport, Configuration, ValidityReport};
use fmkit::ConfigCount;
use serde_json::{json, Number, Value};

use crate::Io;

fn emit(io: &mut Io, text: String, value: Value) {
    if io.json {
        let mut s = serde_json::to_string_pretty(&value).expect("json value");
        s.push('\n');
        io.out.extend_from_slice(s.as_bytes());
    } else {
        io.out.extend_from_slice(text.as_bytes());
    }
}

fn big(n: &ConfigCount) -> Value {
    Value::Number(n.to_string().parse::<Number>().expect("decimal integer"))
}

fn paths<'a>(ps: impl IntoIterator<Item = &'a FeaturePath>) -> Value {
    Value::Array(ps.into_iter().map(|p| Value::from(p.as_str())).collect())
}

fn list(text: &mut String, title: &str, items: &[String]) {
    let _ = writeln!(text, "{title} ({}):", items.len());
    for i in items {
        let _ = writeln!(text, "  {i}");
    }
}

pub(crate) fn structure(io: &mut Io, model: Option<&str>, report: &StructureReport) {
    let mut text = String::new();
    if report.ok() {
        text.push_str("ok\n");
    } else {
        for v in &report.violations {
            let _ = writeln!(text, "{} {}: {}", v.code.as_str(), v.path, v.message);
        }
    }
    let violations: Vec<_> = report
        .violations
        .iter()
        .map(|v| json!({"code": v.code.as_str(), "path": v.path.as_str(), "message": v.message}))
        .collect();
    emit(
        io,
        text,
        json!({"command": "check", "model": model, "ok": report.ok(), "violations": violations}),
    );
}

fn stats_pairs(s: &ModelStats) -> [(&'static str, usize); 11] {
    [
        ("feature_count", s.feature_count),
        ("max_depth", s.max_depth),
        ("mandatory", s.mandatory),
        ("optional", s.optional),
        ("alternative_members", s.alternative_members),
        ("or_members", s.or_members),
        ("and_groups", s.and_groups),
        ("alternative_groups", s.alternative_groups),
        ("or_groups", s.or_groups),
        ("constraint_count", s.constraint_count),
        ("decision_points", s.decision_points()),
    ]
}

pub(crate) fn stats(io: &mut Io, model: &FeatureModel) {
    let pairs = stats_pairs(&model.stats());
    let mut text = format!("model: {}\n", model.name());
    for (k, v) in pairs {
        let _ = writeln!(text, "{k}: {v}");
    }
    let obj: serde_json::Map<_, _> = pairs
        .iter()
        .map(|(k, v)| (k.to_string(), Value::from(*v)))
        .collect();
    emit(
        io,
        text,
        json!({"command": "stats", "model": model.name(), "stats": obj}),
    );
}

pub(crate) fn validity(
    io: &mut Io,
    model: &FeatureModel,
    config: &Configuration,
    report: &ValidityReport,
) {
    let mut text = String::from(if report.valid() {
        "valid\n"
    } else {
        "invalid\n"
    });
    for v in &report.violations {
        let _ = writeln!(text, "{} {}: {}", v.rule.as_str(), v.subject, v.detail);
    }
    let violations: Vec<_> = report
        .violations
        .iter()
        .map(
            |v| json!({"rule": v.rule.as_str(), "subject": v.subject.as_str(), "detail": v.detail}),
        )
        .collect();
    emit(
        io,
        text,
        json!({
            "command": "config validate",
            "model": model.name(),
            "selected": paths(config.iter()),
            "valid": report.valid(),
            "violations": violations,
        }),
    );
}

pub(crate) fn count(io: &mut Io, model: &FeatureModel, count: &ConfigCount) {
    emit(
        io,
        format!("{count}\n"),
        json!({"command": "count", "model": model.name(), "count": big(count)}),
    );
}

pub(crate) fn analysis(io: &mut Io, model: &FeatureModel, r: &AnalysisReport) {
    let mut text = format!(
        "configurations: {}\nvoid: {}\n",
        r.total_valid_configurations,
        r.is_void()
    );
    let strs = |s: &std::collections::BTreeSet<FeaturePath>| -> Vec<String> {
        s.iter().map(|p| p.to_string()).collect()
    };
    list(&mut text, "core", &strs(&r.core));
    list(&mut text, "dead", &strs(&r.dead));
    list(&mut text, "false-optional", &strs(&r.false_optional));
    emit(
        io,
        text,
        json!({
            "command": "analyze",
            "model": model.name(),
            "count": big(&r.total_valid_configurations),
            "void": r.is_void(),
            "core": paths(&r.core),
            "dead": paths(&r.dead),
            "false_optional": paths(&r.false_optional),
        }),
    );
}

pub(crate) fn comparison(io: &mut Io, r: &ComparisonReport) {
    let index = r.commonality_index();
    let value: f64 = r.commonality_as();
    let mut text = format!(
        "model_a: {}\nmodel_b: {}\ncommonality_index: {} ({value:.4})\n",
        r.model_a, r.model_b, index
    );
    let common: Vec<_> = r
        .common
        .iter()
        .map(|p| format!("{} = {} [{}]", p.a, p.b, p.matched_by))
        .collect();
    list(&mut text, "common", &common);
    list(
        &mut text,
        "only_a",
        &r.only_a.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
    );
    list(
        &mut text,
        "only_b",
        &r.only_b.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
    );
    let mismatches: Vec<_> = r
        .classification_mismatches
        .iter()
        .map(|m| format!("{} ({}) = {} ({})", m.a, m.role_a, m.b, m.role_b))
        .collect();
    list(&mut text, "classification_mismatches", &mismatches);
    let ambiguous: Vec<_> = r
        .ambiguous
        .iter()
        .map(|a| {
            let join =
                |v: &[FeaturePath]| v.iter().map(|p| p.as_str()).collect::<Vec<_>>().join(", ");
            format!("{}: {} | {}", a.name, join(&a.in_a), join(&a.in_b))
        })
        .collect();
    list(&mut text, "ambiguous", &ambiguous);

    let value = json!({
        "command": "compare",
        "model_a": r.model_a,
        "model_b": r.model_b,
        "commonality_index": {
            "numerator": index.numer(),
            "denominator": index.denom(),
            "value": value,
        },
        "common": r.common.iter().map(|p| json!({
            "a": p.a.as_str(), "b": p.b.as_str(), "matched_by": p.matched_by.as_str(),
        })).collect::<Vec<_>>(),
        "only_a": paths(&r.only_a),
        "only_b": paths(&r.only_b),
        "classification_mismatches": r.classification_mismatches.iter().map(|m| json!({
            "a": m.a.as_str(), "b": m.b.as_str(),
            "role_a": m.role_a.as_str(), "role_b": m.role_b.as_str(),
        })).collect::<Vec<_>>(),
        "ambiguous": r.ambiguous.iter().map(|a| json!({
            "name": a.name, "in_a": paths(&a.in_a), "in_b": paths(&a.in_b),
        })).collect::<Vec<_>>(),
    });
    emit(io, text, value);
}

pub(crate) fn export(io: &mut Io, onto: &OntologyModel, format: &str, path: &Path) {
    let relations = onto.relations.len();
    let text = format!(
        "wrote {} ({format}, {} classes, {relations} relations)\n",
        path.display(),
        onto.classes.len()
    );
    emit(
        io,
        text,
        json!({
            "command": "export",
            "format": format,
            "output": path.display().to_string(),
            "classes": onto.classes.len(),
            "relations": {
                "composition": onto.count(RelationKind::Composition),
                "aggregation": onto.count(RelationKind::Aggregation),
                "generalization": onto.count(RelationKind::Generalization),
            },
        }),
    );
}

pub(crate) fn corpus_list(io: &mut Io, entries: &[(&str, FeatureModel)]) {
    let mut text = String::new();
    for (id, m) in entries {
        let _ = writeln!(text, "{id}\t{}\t{} features", m.name(), m.len());
    }
    let items: Vec<_> = entries
        .iter()
        .map(|(id, m)| json!({"id": id, "model": m.name(), "features": m.len()}))
        .collect();
    emit(io, text, json!({"command": "corpus list", "corpus": items}));
}
