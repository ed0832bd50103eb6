use std::fmt::Write;

use super::{escape, OntologyModel};

/// Line-oriented exchange text: `ontology`, then `class` lines sorted by
/// name, relation lines in derivation order, and `note` lines per class.
pub fn emit_fmx(onto: &OntologyModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ontology \"{}\"", escape(&onto.name));
    for class in onto.classes.values() {
        out.push_str("class ");
        out.push_str(&class.name);
        if class.is_abstract {
            out.push_str(" abstract");
        }
        if let Some(label) = &class.label {
            let _ = write!(out, " \"{}\"", escape(label));
        }
        out.push('\n');
    }
    for r in &onto.relations {
        let _ = writeln!(out, "{} {} {}", r.kind.as_str(), r.whole, r.part);
    }
    for class in onto.classes.values() {
        for note in &class.comments {
            let _ = writeln!(out, "note {} \"{}\"", class.name, escape(note));
        }
    }
    out
}
