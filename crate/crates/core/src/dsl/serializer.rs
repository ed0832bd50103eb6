use std::fmt::Write;

use super::quote;
use crate::model::{Annotations, ChildGroup, FeatureId, FeatureModel, Variability};

fn meta(ann: &Annotations) -> String {
    match (&ann.full_name, &ann.description) {
        (None, None) => String::new(),
        (Some(f), None) => format!(" (fullname {})", quote(f)),
        (Some(f), Some(d)) => format!(" (fullname {}, desc {})", quote(f), quote(d)),
        (None, Some(d)) => format!(" (desc {})", quote(d)),
    }
}

fn feature(
    out: &mut String,
    model: &FeatureModel,
    id: FeatureId,
    marker: Option<Variability>,
    depth: usize,
) {
    let f = model.feature(id);
    let ind = "  ".repeat(depth);
    let marker = match marker {
        Some(Variability::Mandatory) => "mandatory ",
        Some(Variability::Optional) => "optional ",
        None => "",
    };
    let _ = writeln!(
        out,
        "{ind}{marker}feature {}{} {{",
        f.name(),
        meta(&f.annotations)
    );
    for g in f.child_groups() {
        match g {
            ChildGroup::And(children) => {
                for (c, v) in children {
                    feature(out, model, *c, Some(*v), depth + 1);
                }
            }
            ChildGroup::Alternative(children) | ChildGroup::Or(children) => {
                let kw = if matches!(g, ChildGroup::Alternative(_)) {
                    "alt"
                } else {
                    "or"
                };
                let _ = writeln!(out, "{ind}  {kw} {{");
                for c in children {
                    feature(out, model, *c, None, depth + 2);
                }
                let _ = writeln!(out, "{ind}  }}");
            }
        }
    }
    let _ = writeln!(out, "{ind}}}");
}

/// Canonical text: two-space indentation, every feature braced, children in
/// insertion order, constraints block last and only when non-empty.
pub fn serialize_model(model: &FeatureModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "model {} {{", quote(model.name()));
    feature(&mut out, model, model.root(), None, 1);
    if !model.constraints().is_empty() {
        out.push_str("  constraints {\n");
        for c in model.constraints() {
            let _ = writeln!(out, "    {c}");
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}
