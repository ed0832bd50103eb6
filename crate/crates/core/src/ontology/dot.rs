use std::fmt::Write;

use super::{escape, OntologyModel, RelationKind};

/// Graphviz digraph. Edges run from part (or subclass) to whole (or
/// superclass) so the arrowhead sits at the whole, UML-style: filled
/// diamond for composition, open diamond for aggregation, hollow triangle
/// for generalization. Abstract classes are dashed.
pub fn emit_dot(onto: &OntologyModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", escape(&onto.name));
    out.push_str("  rankdir=BT;\n");
    out.push_str("  node [shape=box];\n");
    for class in onto.classes.values() {
        let mut label = escape(&class.name);
        if let Some(l) = &class.label {
            label.push_str("\\n");
            label.push_str(&escape(l));
        }
        let style = if class.is_abstract {
            ", style=dashed"
        } else {
            ""
        };
        let _ = writeln!(out, "  \"{}\" [label=\"{label}\"{style}];", class.name);
    }
    for r in &onto.relations {
        let head = match r.kind {
            RelationKind::Composition => "diamond",
            RelationKind::Aggregation => "odiamond",
            RelationKind::Generalization => "empty",
        };
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [arrowhead={head}];",
            r.part, r.whole
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_model;
    use crate::ontology::to_ontology;

    fn nodes_edges(dot: &str) -> (usize, usize) {
        let edges = dot.lines().filter(|l| l.contains(" -> ")).count();
        let nodes = dot
            .lines()
            .filter(|l| l.contains("[label=") && !l.contains(" -> "))
            .count();
        (nodes, edges)
    }

    #[test]
    fn single_class() {
        let o = to_ontology(&parse_model("model \"M\" { feature R }").unwrap());
        assert_eq!(nodes_edges(&emit_dot(&o)), (1, 0));
    }

    #[test]
    fn composition_edge() {
        let o = to_ontology(
            &parse_model("model \"M\" { feature R { mandatory feature A (fullname \"a\") } }")
                .unwrap(),
        );
        let dot = emit_dot(&o);
        assert_eq!(nodes_edges(&dot), (2, 1));
        assert!(dot.contains("\"R_A\" -> \"R\" [arrowhead=diamond];"));
        assert!(dot.contains("\"R_A\" [label=\"R_A\\na\"];"));
    }

    #[test]
    fn abstract_dashed() {
        let o = to_ontology(
            &parse_model("model \"M\" { feature R { or { feature A feature B } } }").unwrap(),
        );
        let dot = emit_dot(&o);
        assert!(dot.contains("\"R_1_Or\" [label=\"R_1_Or\", style=dashed];"));
        assert!(dot.contains("\"R_A\" -> \"R_1_Or\" [arrowhead=empty];"));
        assert!(dot.contains("\"R_1_Or\" -> \"R\" [arrowhead=odiamond];"));
    }
}
