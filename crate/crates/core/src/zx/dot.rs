use std::fmt::Write;

use super::diagram::{Diagram, EdgeType, NodeKind};

/// Graphviz rendering: boundaries as boxes, spiders as filled circles
/// labelled with id and phase, Hadamard wires dashed.
pub fn to_dot(d: &Diagram) -> String {
    let mut s = String::from("graph zx {\n  node [fontname=\"monospace\"];\n");
    for v in d.node_ids() {
        let n = d.node(v);
        let (shape, color) = match n.kind {
            NodeKind::Z => ("circle", "palegreen"),
            NodeKind::X => ("circle", "lightcoral"),
            NodeKind::Boundary => ("box", "white"),
        };
        let role = if d.inputs().contains(&v) {
            " in"
        } else if d.outputs().contains(&v) {
            " out"
        } else {
            ""
        };
        let label = if n.kind == NodeKind::Boundary || n.phase.is_zero() {
            format!("{v}{role}")
        } else {
            format!("{v}\\n{}", n.phase)
        };
        let _ = writeln!(s, "  n{v} [label=\"{label}\", shape={shape}, style=filled, fillcolor={color}];");
    }
    for (u, v, t) in d.edges() {
        let style = if t == EdgeType::Hadamard { " [style=dashed, color=blue]" } else { "" };
        let _ = writeln!(s, "  n{u} -- n{v}{style};");
    }
    s.push_str("}\n");
    s
}
