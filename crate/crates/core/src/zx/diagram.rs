use std::collections::BTreeMap;
use std::fmt;

use num::One;

use crate::linalg::C64;
use crate::phase::Phase;

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Z,
    X,
    /// An open wire end. Carries no phase and exactly one edge.
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Node {
    pub kind: NodeKind,
    pub phase: Phase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeType {
    Plain,
    Hadamard,
}

/// Multiplicities of the two wire types between a pair of nodes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EdgeCount {
    pub plain: u32,
    pub hadamard: u32,
}

impl EdgeCount {
    pub fn total(&self) -> u32 {
        self.plain + self.hadamard
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    fn slot(&mut self, ty: EdgeType) -> &mut u32 {
        match ty {
            EdgeType::Plain => &mut self.plain,
            EdgeType::Hadamard => &mut self.hadamard,
        }
    }
}

/// An open ZX diagram with an explicit complex scalar.
///
/// Edges are stored as multiplicities per unordered node pair, so parallel
/// wires and self-loops are representable until normalization removes them.
/// Node ids are never reused within one diagram.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagram {
    nodes: BTreeMap<NodeId, Node>,
    adj: BTreeMap<NodeId, BTreeMap<NodeId, EdgeCount>>,
    inputs: Vec<NodeId>,
    outputs: Vec<NodeId>,
    next_id: NodeId,
    pub scalar: C64,
}

impl Default for Diagram {
    fn default() -> Self {
        Diagram::new()
    }
}

impl Diagram {
    pub fn new() -> Self {
        Diagram {
            nodes: BTreeMap::new(),
            adj: BTreeMap::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            next_id: 0,
            scalar: C64::one(),
        }
    }

    pub fn add_node(&mut self, kind: NodeKind, phase: Phase) -> NodeId {
        let id = self.next_id;
        self.add_node_with_id(id, kind, phase);
        id
    }

    /// Insert a node under a caller-chosen id. Panics if the id is taken.
    pub fn add_node_with_id(&mut self, id: NodeId, kind: NodeKind, phase: Phase) {
        assert!(!self.nodes.contains_key(&id), "node id {id} already in use");
        let phase = if kind == NodeKind::Boundary { Phase::zero() } else { phase };
        self.nodes.insert(id, Node { kind, phase });
        self.adj.insert(id, BTreeMap::new());
        self.next_id = self.next_id.max(id + 1);
    }

    pub fn add_spider(&mut self, phase: Phase) -> NodeId {
        self.add_node(NodeKind::Z, phase)
    }

    pub fn add_input(&mut self) -> NodeId {
        let id = self.add_node(NodeKind::Boundary, Phase::zero());
        self.inputs.push(id);
        id
    }

    pub fn add_output(&mut self) -> NodeId {
        let id = self.add_node(NodeKind::Boundary, Phase::zero());
        self.outputs.push(id);
        id
    }

    pub fn set_inputs(&mut self, ids: Vec<NodeId>) {
        self.inputs = ids;
    }

    pub fn set_outputs(&mut self, ids: Vec<NodeId>) {
        self.outputs = ids;
    }

    pub fn inputs(&self) -> &[NodeId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[NodeId] {
        &self.outputs
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.nodes.contains_key(&v)
    }

    pub fn node(&self, v: NodeId) -> Node {
        self.nodes[&v]
    }

    pub fn kind(&self, v: NodeId) -> NodeKind {
        self.nodes[&v].kind
    }

    pub fn phase(&self, v: NodeId) -> Phase {
        self.nodes[&v].phase
    }

    pub fn set_phase(&mut self, v: NodeId, p: Phase) {
        self.nodes.get_mut(&v).expect("unknown node").phase = p;
    }

    pub fn add_to_phase(&mut self, v: NodeId, p: Phase) {
        let n = self.nodes.get_mut(&v).expect("unknown node");
        n.phase = n.phase + p;
    }

    pub fn set_kind(&mut self, v: NodeId, kind: NodeKind) {
        self.nodes.get_mut(&v).expect("unknown node").kind = kind;
    }

    pub fn is_boundary(&self, v: NodeId) -> bool {
        self.kind(v) == NodeKind::Boundary
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.keys().copied()
    }

    pub fn spider_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().filter(|(_, n)| n.kind != NodeKind::Boundary).map(|(&id, _)| id)
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_spiders(&self) -> usize {
        self.spider_ids().count()
    }

    pub fn next_id(&self) -> NodeId {
        self.next_id
    }

    pub fn edge(&self, u: NodeId, v: NodeId) -> EdgeCount {
        self.adj.get(&u).and_then(|m| m.get(&v)).copied().unwrap_or_default()
    }

    pub fn connected(&self, u: NodeId, v: NodeId) -> bool {
        !self.edge(u, v).is_empty()
    }

    pub fn add_edge(&mut self, u: NodeId, v: NodeId, ty: EdgeType) {
        assert!(self.contains(u) && self.contains(v), "edge endpoint missing");
        *self.adj.get_mut(&u).unwrap().entry(v).or_default().slot(ty) += 1;
        if u != v {
            *self.adj.get_mut(&v).unwrap().entry(u).or_default().slot(ty) += 1;
        }
    }

    /// Remove one wire of the given type. Returns false if there was none.
    pub fn remove_edge(&mut self, u: NodeId, v: NodeId, ty: EdgeType) -> bool {
        if !self.contains(u) || !self.contains(v) {
            return false;
        }
        for (a, b) in [(u, v), (v, u)] {
            let m = self.adj.get_mut(&a).unwrap();
            let Some(cnt) = m.get_mut(&b) else { return false };
            let slot = cnt.slot(ty);
            if *slot == 0 {
                return false;
            }
            *slot -= 1;
            if cnt.is_empty() {
                m.remove(&b);
            }
            if u == v {
                break;
            }
        }
        true
    }

    /// Remove every wire between `u` and `v`.
    pub fn remove_all_edges(&mut self, u: NodeId, v: NodeId) {
        if let Some(m) = self.adj.get_mut(&u) {
            m.remove(&v);
        }
        if let Some(m) = self.adj.get_mut(&v) {
            m.remove(&u);
        }
    }

    /// Add a Hadamard wire if there is none, otherwise remove it.
    ///
    /// This is the edge update of graph-like rewrites and assumes the pair
    /// is joined by at most one Hadamard wire and no plain wire.
    pub fn toggle_hadamard(&mut self, u: NodeId, v: NodeId) {
        if self.edge(u, v).hadamard > 0 {
            self.remove_edge(u, v, EdgeType::Hadamard);
        } else {
            self.add_edge(u, v, EdgeType::Hadamard);
        }
    }

    pub fn remove_node(&mut self, v: NodeId) {
        if let Some(nbrs) = self.adj.remove(&v) {
            for w in nbrs.keys() {
                if let Some(m) = self.adj.get_mut(w) {
                    m.remove(&v);
                }
            }
        }
        self.nodes.remove(&v);
        self.inputs.retain(|&x| x != v);
        self.outputs.retain(|&x| x != v);
    }

    /// Distinct neighbours, excluding `v` itself, in ascending order.
    pub fn neighbors(&self, v: NodeId) -> Vec<NodeId> {
        self.adj[&v].keys().copied().filter(|&w| w != v).collect()
    }

    /// Neighbours with their wire multiplicities, self-loops included.
    pub fn incident(&self, v: NodeId) -> impl Iterator<Item = (NodeId, EdgeCount)> + '_ {
        self.adj[&v].iter().map(|(&w, &c)| (w, c))
    }

    /// Number of wire ends at `v`; a self-loop counts twice.
    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[&v].iter().map(|(&w, c)| c.total() as usize * if w == v { 2 } else { 1 }).sum()
    }

    /// Every wire once, as `(u, v, type)` with `u ≤ v`, in ascending order.
    pub fn edges(&self) -> Vec<(NodeId, NodeId, EdgeType)> {
        let mut out = Vec::new();
        for (&u, m) in &self.adj {
            for (&v, c) in m.range(u..) {
                out.extend(std::iter::repeat_n((u, v, EdgeType::Plain), c.plain as usize));
                out.extend(std::iter::repeat_n((u, v, EdgeType::Hadamard), c.hadamard as usize));
            }
        }
        out
    }

    pub fn num_edges(&self) -> usize {
        self.edges().len()
    }

    pub fn num_hadamard_edges(&self) -> usize {
        self.edges().iter().filter(|e| e.2 == EdgeType::Hadamard).count()
    }

    /// Boundary node attached to spider `v`, if any.
    pub fn boundary_neighbors(&self, v: NodeId) -> Vec<NodeId> {
        self.neighbors(v).into_iter().filter(|&w| self.is_boundary(w)).collect()
    }

    /// A spider with no boundary neighbour.
    pub fn is_interior(&self, v: NodeId) -> bool {
        !self.is_boundary(v) && self.boundary_neighbors(v).is_empty()
    }

    pub fn mul_scalar(&mut self, k: C64) {
        self.scalar *= k;
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "inputs {:?} outputs {:?} scalar {:.6}", self.inputs, self.outputs, self.scalar)?;
        for (&id, n) in &self.nodes {
            writeln!(f, "  {id}: {:?} {}", n.kind, n.phase)?;
        }
        for (u, v, t) in self.edges() {
            writeln!(f, "  {u} -{}- {v}", if t == EdgeType::Hadamard { "H" } else { "" })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_are_counted_with_multiplicity() {
        let mut d = Diagram::new();
        let a = d.add_spider(Phase::zero());
        let b = d.add_spider(Phase::zero());
        d.add_edge(a, b, EdgeType::Hadamard);
        d.add_edge(b, a, EdgeType::Hadamard);
        d.add_edge(a, a, EdgeType::Plain);
        assert_eq!(d.edge(a, b).hadamard, 2);
        assert_eq!(d.degree(a), 4);
        assert_eq!(d.neighbors(a), vec![b]);
        assert_eq!(d.num_edges(), 3);
        assert!(d.remove_edge(a, a, EdgeType::Plain));
        assert!(!d.remove_edge(a, a, EdgeType::Plain));
        assert_eq!(d.degree(a), 2);
    }

    #[test]
    fn toggling_twice_restores_the_graph() {
        let mut d = Diagram::new();
        let a = d.add_spider(Phase::zero());
        let b = d.add_spider(Phase::zero());
        d.toggle_hadamard(a, b);
        assert!(d.connected(a, b));
        d.toggle_hadamard(b, a);
        assert!(!d.connected(a, b));
    }

    #[test]
    fn removing_a_node_clears_boundary_lists() {
        let mut d = Diagram::new();
        let i = d.add_input();
        let s = d.add_spider(Phase::pi());
        d.add_edge(i, s, EdgeType::Plain);
        d.remove_node(i);
        assert!(d.inputs().is_empty());
        assert!(d.neighbors(s).is_empty());
        assert_eq!(d.add_spider(Phase::zero()), 2);
    }
}
