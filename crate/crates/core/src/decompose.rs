//! Splitting a measurement graph into GHZ stars and linear chains that a
//! photonic source can emit, plus the Type-1 fusions that glue them back.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::mgraph::{MGraph, VertexId};
use crate::sim::{fidelity, fuse_type1, SimError, StateVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubgraphKind {
    #[serde(rename = "GHZ")]
    Ghz,
    #[serde(rename = "LINEAR")]
    Linear,
}

/// A primitive graph state.
///
/// GHZ nodes list the root first and then the leaves in ascending order.
/// LINEAR nodes run from one end of the chain to the other; a chain that
/// closes a cycle repeats its first node at the end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgraph {
    pub kind: SubgraphKind,
    pub nodes: Vec<VertexId>,
}

impl Subgraph {
    /// Edges between positions, in emission order.
    pub fn position_edges(&self) -> Vec<(usize, usize)> {
        match self.kind {
            SubgraphKind::Ghz => (1..self.nodes.len()).map(|i| (0, i)).collect(),
            SubgraphKind::Linear => (1..self.nodes.len()).map(|i| (i - 1, i)).collect(),
        }
    }

    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        self.position_edges().into_iter().map(|(a, b)| (self.nodes[a], self.nodes[b])).collect()
    }
}

/// Position of one node occurrence: (subgraph index, index in its node list).
pub type Occurrence = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fusion {
    pub node: VertexId,
    /// The occurrence that survives the fusion.
    pub keep: Occurrence,
    /// The occurrence whose photon is consumed.
    pub consume: Occurrence,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionPlan {
    pub subgraphs: Vec<Subgraph>,
    pub fusions: Vec<Fusion>,
    pub photon_count: usize,
    pub fusion_count: usize,
}

impl DecompositionPlan {
    pub fn ghz_count(&self) -> usize {
        self.subgraphs.iter().filter(|s| s.kind == SubgraphKind::Ghz).count()
    }

    pub fn linear_count(&self) -> usize {
        self.subgraphs.iter().filter(|s| s.kind == SubgraphKind::Linear).count()
    }

    /// Every occurrence of every node, in plan order.
    pub fn occurrences(&self) -> BTreeMap<VertexId, Vec<Occurrence>> {
        let mut occ: BTreeMap<VertexId, Vec<Occurrence>> = BTreeMap::new();
        for (si, s) in self.subgraphs.iter().enumerate() {
            for (pi, &v) in s.nodes.iter().enumerate() {
                occ.entry(v).or_default().push((si, pi));
            }
        }
        occ
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Remaining edges, kept as sorted adjacency sets for deterministic scans.
struct Residual {
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl Residual {
    fn remove(&mut self, a: VertexId, b: VertexId) {
        self.adj.get_mut(&a).map(|s| s.remove(&b));
        self.adj.get_mut(&b).map(|s| s.remove(&a));
    }

    fn is_empty(&self) -> bool {
        self.adj.values().all(|s| s.is_empty())
    }
}

/// Decompose `m` into primitives.
///
/// While some node has more than two remaining edges, the one with the most
/// (ties to the lower id) becomes a GHZ root and its whole remaining star is
/// extracted. What is left has maximum degree two and is cut into maximal
/// chains, starting from the lowest-id chain end; cycles open at their
/// lowest-id node. Nodes without edges become single-photon chains. Each
/// node occurring k times yields k − 1 fusions, all onto its first
/// occurrence.
pub fn decompose(m: &MGraph) -> DecompositionPlan {
    let mut res = Residual { adj: m.vertex_ids().map(|v| (v, BTreeSet::new())).collect() };
    for (a, b) in m.edges() {
        res.adj.get_mut(&a).unwrap().insert(b);
        res.adj.get_mut(&b).unwrap().insert(a);
    }
    let mut subgraphs = Vec::new();

    loop {
        let root = res
            .adj
            .iter()
            .filter(|(_, s)| s.len() > 2)
            .max_by(|(a, sa), (b, sb)| sa.len().cmp(&sb.len()).then(b.cmp(a)))
            .map(|(&v, _)| v);
        let Some(root) = root else { break };
        let leaves: Vec<VertexId> = res.adj[&root].iter().copied().collect();
        for &l in &leaves {
            res.remove(root, l);
        }
        let mut nodes = vec![root];
        nodes.extend(leaves);
        subgraphs.push(Subgraph { kind: SubgraphKind::Ghz, nodes });
    }

    while !res.is_empty() {
        let start = res
            .adj
            .iter()
            .find(|(_, s)| s.len() == 1)
            .or_else(|| res.adj.iter().find(|(_, s)| !s.is_empty()))
            .map(|(&v, _)| v)
            .unwrap();
        let mut nodes = vec![start];
        let mut cur = start;
        while let Some(&next) = res.adj[&cur].iter().next() {
            res.remove(cur, next);
            nodes.push(next);
            cur = next;
        }
        subgraphs.push(Subgraph { kind: SubgraphKind::Linear, nodes });
    }

    let covered: BTreeSet<VertexId> = subgraphs.iter().flat_map(|s| s.nodes.iter().copied()).collect();
    for v in m.vertex_ids().filter(|v| !covered.contains(v)) {
        subgraphs.push(Subgraph { kind: SubgraphKind::Linear, nodes: vec![v] });
    }

    let mut plan = DecompositionPlan { subgraphs, ..Default::default() };
    for (node, occ) in plan.occurrences() {
        for &other in &occ[1..] {
            plan.fusions.push(Fusion { node, keep: occ[0], consume: other });
        }
    }
    plan.photon_count = plan.subgraphs.iter().map(|s| s.nodes.len()).sum();
    plan.fusion_count = plan.fusions.len();
    plan
}

/// Largest graph for which [`verify_plan`] also simulates the fusions.
pub const VERIFY_SIM_CAP: usize = 12;

/// Why a plan fails to rebuild its graph.
#[derive(Clone, Debug, PartialEq)]
pub enum PlanDefect {
    UnknownNode(VertexId),
    BadOccurrence(Occurrence),
    BadFusion(usize),
    EdgeMismatch,
    CountMismatch,
    Unfused(VertexId),
    Simulation(String),
    LowFidelity(f64),
}

/// Check that `plan` rebuilds `m`: its edges are exactly those of `m`, the
/// fusions identify every repeated node and the counts agree. For graphs of
/// at most [`VERIFY_SIM_CAP`] nodes the fusions are also simulated and the
/// result compared with the graph state of `m`.
pub fn check_plan(plan: &DecompositionPlan, m: &MGraph) -> Result<(), PlanDefect> {
    for s in &plan.subgraphs {
        if let Some(&v) = s.nodes.iter().find(|&&v| m.vertex(v).is_none()) {
            return Err(PlanDefect::UnknownNode(v));
        }
    }
    let mut rebuilt: Vec<(VertexId, VertexId)> =
        plan.subgraphs.iter().flat_map(|s| s.edges()).map(|(a, b)| (a.min(b), a.max(b))).collect();
    rebuilt.sort_unstable();
    let original: Vec<(VertexId, VertexId)> = m.edges().collect();
    if rebuilt != original {
        return Err(PlanDefect::EdgeMismatch);
    }
    let occ = plan.occurrences();
    if occ.len() != m.num_vertices() {
        return Err(PlanDefect::EdgeMismatch);
    }
    let valid = |o: Occurrence| plan.subgraphs.get(o.0).is_some_and(|s| o.1 < s.nodes.len());
    // union-find over occurrences, one class per node once fused
    let mut parent: BTreeMap<Occurrence, Occurrence> = occ.values().flatten().map(|&o| (o, o)).collect();
    fn find(p: &mut BTreeMap<Occurrence, Occurrence>, o: Occurrence) -> Occurrence {
        let up = p[&o];
        if up == o {
            return o;
        }
        let r = find(p, up);
        p.insert(o, r);
        r
    }
    for (i, f) in plan.fusions.iter().enumerate() {
        for o in [f.keep, f.consume] {
            if !valid(o) {
                return Err(PlanDefect::BadOccurrence(o));
            }
            if plan.subgraphs[o.0].nodes[o.1] != f.node {
                return Err(PlanDefect::BadFusion(i));
            }
        }
        let (a, b) = (find(&mut parent, f.keep), find(&mut parent, f.consume));
        if a == b {
            return Err(PlanDefect::BadFusion(i));
        }
        parent.insert(b, a);
    }
    for (&node, list) in &occ {
        let root = find(&mut parent, list[0]);
        if list.iter().any(|&o| find(&mut parent, o) != root) {
            return Err(PlanDefect::Unfused(node));
        }
    }
    let expected_fusions: usize = occ.values().map(|l| l.len() - 1).sum();
    let photons: usize = plan.subgraphs.iter().map(|s| s.nodes.len()).sum();
    if plan.fusion_count != expected_fusions || plan.fusions.len() != expected_fusions || plan.photon_count != photons
    {
        return Err(PlanDefect::CountMismatch);
    }
    if m.num_vertices() <= VERIFY_SIM_CAP {
        let f = simulate_fusions(plan, m).map_err(|e| PlanDefect::Simulation(e.to_string()))?;
        if f < 1.0 - 1e-9 {
            return Err(PlanDefect::LowFidelity(f));
        }
    }
    Ok(())
}

pub fn verify_plan(plan: &DecompositionPlan, m: &MGraph) -> bool {
    check_plan(plan, m).is_ok()
}

/// Emit every subgraph as a graph state, apply the fusions as soon as both
/// photons exist, and return the fidelity with the graph state of `m`.
pub fn simulate_fusions(plan: &DecompositionPlan, m: &MGraph) -> Result<f64, SimError> {
    // photon label: node id for the surviving occurrence, fresh ids otherwise
    let fresh_base = m.vertex_ids().max().map_or(0, |v| v + 1);
    let mut label: BTreeMap<Occurrence, usize> = BTreeMap::new();
    let mut next = fresh_base;
    let consumed: BTreeSet<Occurrence> = plan.fusions.iter().map(|f| f.consume).collect();
    for (si, s) in plan.subgraphs.iter().enumerate() {
        for (pi, &v) in s.nodes.iter().enumerate() {
            let l = if consumed.contains(&(si, pi)) {
                next += 1;
                next - 1
            } else {
                v
            };
            label.insert((si, pi), l);
        }
    }

    let mut state = StateVector::unit();
    let mut pending: Vec<&Fusion> = plan.fusions.iter().collect();
    for (si, s) in plan.subgraphs.iter().enumerate() {
        let labels: Vec<usize> = (0..s.nodes.len()).map(|pi| label[&(si, pi)]).collect();
        let mut block = StateVector::plus(&labels)?;
        for (a, b) in s.position_edges() {
            block.apply_cz(a, b);
        }
        state = state.tensor(&block)?;
        let mut still = Vec::new();
        for f in pending {
            let (ka, kb) = (label[&f.keep], label[&f.consume]);
            match (state.position(ka), state.position(kb)) {
                (Some(pa), Some(pb)) => state = fuse_type1(&state, pa, pb)?.normalized()?,
                _ => still.push(f),
            }
        }
        pending = still;
    }
    if !pending.is_empty() {
        return Err(SimError::LabelMismatch);
    }

    let ids: Vec<VertexId> = m.vertex_ids().collect();
    let mut reference = StateVector::plus(&ids)?;
    for (a, b) in m.edges() {
        let (pa, pb) = (reference.position(a).unwrap(), reference.position(b).unwrap());
        reference.apply_cz(pa, pb);
    }
    fidelity(&reference, &state)
}
