//! Measurement graphs: vertices with equatorial measurement angles, CZ edges
//! and an execution order.
//!
//! A vertex measured at angle α corresponds to a Z spider of phase −α, an
//! edge to a Hadamard wire, and input and output vertices to spiders wired
//! plainly to the diagram boundary.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::phase::{Phase, Rational};
use crate::qasm::{NativeOp, NativeSeq};
use crate::zx::{check_graph_like, Diagram, EdgeType, NodeId, NodeKind};

pub type VertexId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Input,
    Body,
    Output,
    InputOutput,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Vertex {
    pub id: VertexId,
    /// Measurement angle; `None` exactly for output vertices.
    pub angle: Option<Phase>,
    pub row: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MGraphError {
    #[error("diagram is not graph-like: {0}")]
    NotGraphLike(String),
    #[error("malformed measurement graph: {0}")]
    Malformed(String),
    #[error("invalid JSON: {0}")]
    Json(String),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MGraph {
    vertices: BTreeMap<VertexId, Vertex>,
    edges: BTreeSet<(VertexId, VertexId)>,
    /// One entry per logical qubit, in qubit order.
    pub inputs: Vec<VertexId>,
    /// One entry per logical qubit, in qubit order.
    pub outputs: Vec<VertexId>,
    /// Output qubits that receive a Pauli Z after the pattern has run. These
    /// corrections are tracked classically and cost no vertices.
    pub output_z: BTreeSet<usize>,
    /// Measured vertices in execution order.
    pub order: Vec<VertexId>,
}

fn key(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    (a.min(b), a.max(b))
}

impl MGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, id: VertexId, angle: Option<Phase>, row: Option<usize>) {
        self.vertices.insert(id, Vertex { id, angle, row });
    }

    pub fn add_edge(&mut self, a: VertexId, b: VertexId) {
        assert!(a != b, "self-loop in measurement graph");
        self.edges.insert(key(a, b));
    }

    /// Insert the edge if absent, remove it otherwise (two CZs cancel).
    pub fn toggle_edge(&mut self, a: VertexId, b: VertexId) {
        let k = key(a, b);
        if !self.edges.remove(&k) {
            self.edges.insert(k);
        }
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.edges.contains(&key(a, b))
    }

    pub fn vertex(&self, id: VertexId) -> Option<&Vertex> {
        self.vertices.get(&id)
    }

    pub fn vertex_mut(&mut self, id: VertexId) -> Option<&mut Vertex> {
        self.vertices.get_mut(&id)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.values()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.keys().copied()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let mut n: Vec<VertexId> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .collect();
        n.sort_unstable();
        n
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn role(&self, v: VertexId) -> Role {
        match (self.inputs.contains(&v), self.outputs.contains(&v)) {
            (true, true) => Role::InputOutput,
            (true, false) => Role::Input,
            (false, true) => Role::Output,
            (false, false) => Role::Body,
        }
    }

    pub fn is_output(&self, v: VertexId) -> bool {
        self.outputs.contains(&v)
    }

    pub fn measured(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.values().filter(|v| v.angle.is_some())
    }

    pub fn num_measured(&self) -> usize {
        self.measured().count()
    }

    /// Check the structural invariants.
    pub fn validate(&self) -> Result<(), MGraphError> {
        let bad = |m: String| Err(MGraphError::Malformed(m));
        if self.inputs.len() != self.outputs.len() {
            return bad(format!("{} inputs but {} outputs", self.inputs.len(), self.outputs.len()));
        }
        for (list, name) in [(&self.inputs, "input"), (&self.outputs, "output")] {
            let set: BTreeSet<_> = list.iter().collect();
            if set.len() != list.len() {
                return bad(format!("repeated {name} vertex"));
            }
            if let Some(v) = list.iter().find(|v| !self.vertices.contains_key(v)) {
                return bad(format!("{name} vertex {v} does not exist"));
            }
        }
        for &(a, b) in &self.edges {
            if !self.vertices.contains_key(&a) || !self.vertices.contains_key(&b) {
                return bad(format!("edge {a}-{b} has a missing endpoint"));
            }
        }
        for v in self.vertices.values() {
            if self.is_output(v.id) == v.angle.is_some() {
                return bad(format!("vertex {} must carry an angle iff it is not an output", v.id));
            }
        }
        if let Some(q) = self.output_z.iter().find(|&&q| q >= self.outputs.len()) {
            return bad(format!("Z correction on missing output {q}"));
        }
        let measured: BTreeSet<VertexId> = self.measured().map(|v| v.id).collect();
        let ordered: BTreeSet<VertexId> = self.order.iter().copied().collect();
        if ordered != measured || self.order.len() != measured.len() {
            return bad("order must list every measured vertex once".into());
        }
        Ok(())
    }
}

/// Build the measurement graph of a native sequence.
///
/// Vertex `q` is the input of row `q`. `HRZ(q, θ)` gives the current
/// frontier of row `q` the angle −θ and appends a new vertex behind it; a
/// `CZ` toggles the edge between two frontiers. Final frontiers are outputs.
/// Measurement order runs column by column, then by row.
pub fn build_mgraph(s: &NativeSeq) -> MGraph {
    let n = s.num_qubits;
    let mut m = MGraph::new();
    let mut column: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut frontier: Vec<VertexId> = (0..n).collect();
    let mut depth = vec![0usize; n];
    let mut pending: BTreeMap<VertexId, Phase> = BTreeMap::new();
    for q in 0..n {
        m.add_vertex(q, None, Some(q));
        column.insert(q, 0);
    }
    let mut next = n;
    for op in &s.ops {
        match *op {
            NativeOp::HRz { qubit, theta } => {
                let f = frontier[qubit];
                pending.insert(f, -theta);
                depth[qubit] += 1;
                m.add_vertex(next, None, Some(qubit));
                column.insert(next, depth[qubit]);
                m.add_edge(f, next);
                frontier[qubit] = next;
                next += 1;
            }
            NativeOp::Cz { a, b } => m.toggle_edge(frontier[a], frontier[b]),
        }
    }
    for (v, alpha) in pending {
        m.vertex_mut(v).unwrap().angle = Some(alpha);
    }
    m.inputs = (0..n).collect();
    m.outputs = frontier;
    let mut measured: Vec<VertexId> = m.measured().map(|v| v.id).collect();
    measured.sort_by_key(|&v| (column[&v], m.vertices[&v].row, v));
    m.order = measured;
    m
}

/// Read a measurement graph as a graph-like diagram.
///
/// Spiders keep the vertex ids; boundary nodes take fresh ids above them.
pub fn as_graph_like(m: &MGraph) -> Diagram {
    let mut d = Diagram::new();
    for v in m.vertices() {
        d.add_node_with_id(v.id, NodeKind::Z, v.angle.map(|a| -a).unwrap_or_default());
    }
    for &q in &m.output_z {
        d.add_to_phase(m.outputs[q], Phase::pi());
    }
    for (a, b) in m.edges() {
        d.add_edge(a, b, EdgeType::Hadamard);
    }
    let ins: Vec<NodeId> = m
        .inputs
        .iter()
        .map(|&v| {
            let b = d.add_node(NodeKind::Boundary, Phase::zero());
            d.add_edge(b, v, EdgeType::Plain);
            b
        })
        .collect();
    let outs: Vec<NodeId> = m
        .outputs
        .iter()
        .map(|&v| {
            let b = d.add_node(NodeKind::Boundary, Phase::zero());
            d.add_edge(v, b, EdgeType::Plain);
            b
        })
        .collect();
    d.set_inputs(ins);
    d.set_outputs(outs);
    d
}

/// Read a graph-like diagram back as a measurement pattern.
///
/// Spider ids become vertex ids and phases θ become angles −θ. Where a
/// boundary cannot attach plainly to a distinct vertex (a Hadamard boundary
/// wire, a spider shared by two inputs, an output spider with a non-Pauli
/// phase or one already taken as an output) phase-free vertices are inserted
/// so that every qubit gets its own input and output vertex. An output spider
/// with phase π becomes a plain output with a Z correction. The order is breadth-first
/// distance from the inputs, ties by id, unreachable vertices last.
pub fn extract_pattern(d: &Diagram) -> Result<MGraph, MGraphError> {
    check_graph_like(d).map_err(MGraphError::NotGraphLike)?;
    let mut phases: BTreeMap<VertexId, Phase> = d.spider_ids().map(|v| (v, d.phase(v))).collect();
    let mut edges: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    for (u, v, _) in d.edges() {
        if !d.is_boundary(u) && !d.is_boundary(v) {
            edges.insert(key(u, v));
        }
    }
    let mut next = d.next_id();
    let mut fresh = |phases: &mut BTreeMap<VertexId, Phase>| {
        let id = next;
        next += 1;
        phases.insert(id, Phase::zero());
        id
    };

    let mut inputs = Vec::new();
    for &b in d.inputs() {
        let s = d.neighbors(b)[0];
        let hadamard = d.edge(b, s).hadamard > 0;
        let v = if inputs.contains(&s) {
            let x = fresh(&mut phases);
            let y = fresh(&mut phases);
            edges.insert(key(x, y));
            edges.insert(key(y, s));
            if hadamard {
                // the chain x–y–s is an identity, so one more vertex turns it into H
                let z = fresh(&mut phases);
                edges.remove(&key(x, y));
                edges.insert(key(z, x));
                edges.insert(key(z, y));
                z
            } else {
                x
            }
        } else if hadamard {
            let x = fresh(&mut phases);
            edges.insert(key(x, s));
            x
        } else {
            s
        };
        inputs.push(v);
    }

    let mut outputs: Vec<VertexId> = Vec::new();
    let mut output_z = BTreeSet::new();
    for &b in d.outputs() {
        let s = d.neighbors(b)[0];
        let hadamard = d.edge(b, s).hadamard > 0;
        let v = if hadamard {
            let x = fresh(&mut phases);
            edges.insert(key(s, x));
            x
        } else if phases[&s] == Phase::pi() && !outputs.contains(&s) {
            output_z.insert(outputs.len());
            phases.insert(s, Phase::zero());
            s
        } else if !phases[&s].is_zero() || outputs.contains(&s) {
            let x = fresh(&mut phases);
            let y = fresh(&mut phases);
            edges.insert(key(s, x));
            edges.insert(key(x, y));
            y
        } else {
            s
        };
        outputs.push(v);
    }

    let mut m = MGraph::new();
    for (&v, &p) in &phases {
        let angle = if outputs.contains(&v) { None } else { Some(-p) };
        m.add_vertex(v, angle, None);
    }
    for (a, b) in edges {
        m.add_edge(a, b);
    }
    m.inputs = inputs;
    m.outputs = outputs;
    m.output_z = output_z;
    m.order = distance_order(&m);
    Ok(m)
}

/// Measured vertices sorted by breadth-first distance from the inputs.
pub fn distance_order(m: &MGraph) -> Vec<VertexId> {
    let mut dist: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut queue: VecDeque<VertexId> = VecDeque::new();
    for &i in &m.inputs {
        if dist.insert(i, 0).is_none() {
            queue.push_back(i);
        }
    }
    while let Some(v) = queue.pop_front() {
        let dv = dist[&v];
        for w in m.neighbors(v) {
            if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(w) {
                e.insert(dv + 1);
                queue.push_back(w);
            }
        }
    }
    let mut order: Vec<VertexId> = m.measured().map(|v| v.id).collect();
    order.sort_by_key(|v| (dist.get(v).copied().unwrap_or(usize::MAX), *v));
    order
}

#[derive(Serialize, Deserialize)]
struct VertexJson {
    id: VertexId,
    angle_num: Option<i64>,
    angle_den: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    angle_rad: Option<f64>,
    role: Role,
    row: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct MGraphJson {
    vertices: Vec<VertexJson>,
    edges: Vec<[VertexId; 2]>,
    order: Vec<VertexId>,
    inputs: Vec<VertexId>,
    outputs: Vec<VertexId>,
    #[serde(default)]
    output_z: Vec<usize>,
}

impl MGraph {
    /// JSON form. Exact angles are written as `angle_num/angle_den · π`,
    /// other angles as `angle_rad`.
    pub fn to_json(&self) -> String {
        let vertices = self
            .vertices
            .values()
            .map(|v| {
                let (num, den, rad) = match v.angle {
                    Some(Phase::Exact(r)) => (Some(*r.numer()), Some(*r.denom()), None),
                    Some(Phase::Float(x)) => (None, None, Some(x)),
                    None => (None, None, None),
                };
                VertexJson { id: v.id, angle_num: num, angle_den: den, angle_rad: rad, role: self.role(v.id), row: v.row }
            })
            .collect();
        let j = MGraphJson {
            vertices,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            order: self.order.clone(),
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            output_z: self.output_z.iter().copied().collect(),
        };
        serde_json::to_string_pretty(&j).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<MGraph, MGraphError> {
        let j: MGraphJson = serde_json::from_str(text).map_err(|e| MGraphError::Json(e.to_string()))?;
        let mut m = MGraph::new();
        for v in j.vertices {
            let angle = match (v.angle_num, v.angle_den, v.angle_rad) {
                (Some(n), Some(d), _) if d != 0 => Some(Phase::exact(Rational::new(n, d))),
                (_, _, Some(x)) => Some(Phase::from_radians(x)),
                (None, None, None) => None,
                _ => return Err(MGraphError::Malformed(format!("vertex {} has an invalid angle", v.id))),
            };
            m.add_vertex(v.id, angle, v.row);
        }
        for [a, b] in j.edges {
            if a == b {
                return Err(MGraphError::Malformed(format!("self-loop at {a}")));
            }
            m.add_edge(a, b);
        }
        m.inputs = j.inputs;
        m.outputs = j.outputs;
        m.output_z = j.output_z.into_iter().collect();
        m.order = j.order;
        m.validate()?;
        Ok(m)
    }
}

/// Angle in radians for display, `None` for outputs.
pub fn angle_radians(v: &Vertex) -> Option<f64> {
    v.angle.map(|a| match a {
        Phase::Exact(r) => r.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI,
        Phase::Float(x) => x,
    })
}
