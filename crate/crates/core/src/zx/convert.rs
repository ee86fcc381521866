use std::f64::consts::FRAC_1_SQRT_2;

use super::diagram::{Diagram, EdgeType, NodeId, NodeKind};
use crate::linalg::C64;
use crate::phase::Phase;
use crate::qasm::{NativeOp, NativeSeq};

/// Diagram of a native sequence.
///
/// Each qubit starts with a phase-free spider attached to its input. An
/// `HRZ(q, θ)` adds θ to the phase of q's current frontier spider and opens a
/// fresh phase-free frontier spider behind a Hadamard wire. A `CZ` joins the
/// two frontier spiders with a Hadamard wire. Frontier spiders finally attach
/// to the outputs by plain wires.
///
/// Repeated `CZ`s on one pair leave parallel Hadamard wires, which
/// [`to_graph_like`] removes.
pub fn native_to_diagram(s: &NativeSeq) -> Diagram {
    let mut d = Diagram::new();
    let inputs: Vec<NodeId> = (0..s.num_qubits).map(|_| d.add_input()).collect();
    let mut frontier: Vec<NodeId> = Vec::with_capacity(s.num_qubits);
    for &i in &inputs {
        let v = d.add_spider(Phase::zero());
        d.add_edge(i, v, EdgeType::Plain);
        frontier.push(v);
    }
    for op in &s.ops {
        match *op {
            NativeOp::HRz { qubit, theta } => {
                let f = frontier[qubit];
                d.add_to_phase(f, theta);
                let v = d.add_spider(Phase::zero());
                d.add_edge(f, v, EdgeType::Hadamard);
                frontier[qubit] = v;
            }
            NativeOp::Cz { a, b } => d.add_edge(frontier[a], frontier[b], EdgeType::Hadamard),
        }
    }
    for &f in &frontier {
        let o = d.add_output();
        d.add_edge(f, o, EdgeType::Plain);
    }
    d
}

/// Merge spider `v` into spider `u`, which must be joined by a plain wire.
///
/// Phases add and every wire of `v` moves to `u`; the other wires between the
/// two become self-loops on `u`.
pub(crate) fn merge_into(d: &mut Diagram, u: NodeId, v: NodeId) {
    assert!(d.edge(u, v).plain > 0, "merge needs a plain wire");
    d.remove_edge(u, v, EdgeType::Plain);
    d.add_to_phase(u, d.phase(v));
    let wires: Vec<_> = d.incident(v).collect();
    for (w, cnt) in wires {
        let target = if w == v { u } else { w };
        for _ in 0..cnt.plain {
            d.add_edge(u, target, EdgeType::Plain);
        }
        for _ in 0..cnt.hadamard {
            d.add_edge(u, target, EdgeType::Hadamard);
        }
    }
    d.remove_node(v);
}

/// Bring a diagram into graph-like form.
///
/// X spiders change color, plain-wired spiders fuse, self-loops disappear
/// (a Hadamard loop adds π), parallel Hadamard wires cancel in pairs and a
/// boundary wired straight to another boundary gets a phase-free spider in
/// between. The scalar is updated at every step so the map is preserved
/// exactly.
pub fn to_graph_like(d: &Diagram) -> Diagram {
    let mut d = d.clone();

    let xs: Vec<NodeId> = d.node_ids().filter(|&v| d.kind(v) == NodeKind::X).collect();
    for v in xs {
        d.set_kind(v, NodeKind::Z);
        let wires: Vec<_> = d.incident(v).filter(|&(w, _)| w != v).collect();
        for (w, cnt) in wires {
            d.remove_all_edges(v, w);
            for _ in 0..cnt.plain {
                d.add_edge(v, w, EdgeType::Hadamard);
            }
            for _ in 0..cnt.hadamard {
                d.add_edge(v, w, EdgeType::Plain);
            }
        }
    }

    loop {
        let pair = d.edges().into_iter().find(|&(u, v, t)| {
            t == EdgeType::Plain && u != v && !d.is_boundary(u) && !d.is_boundary(v)
        });
        match pair {
            Some((u, v, _)) => merge_into(&mut d, u, v),
            None => break,
        }
    }

    let spiders: Vec<NodeId> = d.spider_ids().collect();
    for v in spiders {
        let cnt = d.edge(v, v);
        d.remove_all_edges(v, v);
        for _ in 0..cnt.hadamard {
            d.add_to_phase(v, Phase::pi());
            d.mul_scalar(C64::new(FRAC_1_SQRT_2, 0.0));
        }
    }

    for (u, v, _) in d.edges() {
        if u != v && !d.is_boundary(u) && !d.is_boundary(v) {
            let h = d.edge(u, v).hadamard;
            if h >= 2 {
                d.remove_all_edges(u, v);
                if h % 2 == 1 {
                    d.add_edge(u, v, EdgeType::Hadamard);
                }
                d.mul_scalar(C64::new(0.5f64.powi((h / 2) as i32), 0.0));
            }
        }
    }

    let direct: Vec<_> = d
        .edges()
        .into_iter()
        .filter(|&(u, v, _)| d.is_boundary(u) && d.is_boundary(v))
        .collect();
    for (u, v, t) in direct {
        d.remove_edge(u, v, t);
        let z = d.add_spider(Phase::zero());
        d.add_edge(u, z, EdgeType::Plain);
        d.add_edge(z, v, t);
    }
    d
}

/// Check the graph-like invariants, describing the first violation found.
pub fn check_graph_like(d: &Diagram) -> Result<(), String> {
    for &b in d.inputs() {
        if d.outputs().contains(&b) {
            return Err(format!("node {b} is both input and output"));
        }
    }
    for v in d.node_ids() {
        match d.kind(v) {
            NodeKind::X => return Err(format!("node {v} is an X spider")),
            NodeKind::Boundary => {
                if !d.inputs().contains(&v) && !d.outputs().contains(&v) {
                    return Err(format!("boundary {v} is neither input nor output"));
                }
                if d.degree(v) != 1 {
                    return Err(format!("boundary {v} has degree {}", d.degree(v)));
                }
                if d.neighbors(v).iter().any(|&w| d.is_boundary(w)) {
                    return Err(format!("boundary {v} is wired to another boundary"));
                }
            }
            NodeKind::Z => {
                if !d.edge(v, v).is_empty() {
                    return Err(format!("spider {v} has a self-loop"));
                }
                for (w, cnt) in d.incident(v) {
                    if !d.is_boundary(w) && (cnt.plain > 0 || cnt.hadamard != 1) {
                        return Err(format!("spiders {v} and {w} are not joined by a single Hadamard wire"));
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn is_graph_like(d: &Diagram) -> bool {
    check_graph_like(d).is_ok()
}
