//! Individual rewrites on graph-like diagrams.
//!
//! Every rewrite keeps the represented map exactly, scalar included. Hadamard
//! wires are the normalized matrix, so toggling an edge is not free: adding
//! one multiplies the remaining diagram by `√2` and removing one by `1/√2`.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use num::One;

use super::{NotApplicable, Rule};
use crate::linalg::{cis, C64};
use crate::phase::Phase;
use crate::zx::{merge_into, Diagram, EdgeType, NodeId, NodeKind};

pub(crate) fn sqrt2_pow(e: i32) -> C64 {
    let mag = if e % 2 == 0 { 2f64.powi(e / 2) } else { SQRT_2.powi(e) };
    C64::new(mag, 0.0)
}

fn refuse(rule: Rule, at: &[NodeId]) -> NotApplicable {
    NotApplicable { rule, at: at.to_vec() }
}

/// Toggle a Hadamard wire and report the change in `√2` exponent.
fn toggle(d: &mut Diagram, a: NodeId, b: NodeId) -> i32 {
    if d.edge(a, b).hadamard > 0 {
        d.remove_edge(a, b, EdgeType::Hadamard);
        -1
    } else {
        d.add_edge(a, b, EdgeType::Hadamard);
        1
    }
}

fn is_spider(d: &Diagram, v: NodeId) -> bool {
    d.contains(v) && d.kind(v) == NodeKind::Z
}

/// Clean up after a merge at `v`: parallel Hadamard pairs and self-loops.
fn normalize_at(d: &mut Diagram, v: NodeId) {
    let loops = d.edge(v, v);
    d.remove_all_edges(v, v);
    for _ in 0..loops.hadamard {
        d.add_to_phase(v, Phase::pi());
        d.mul_scalar(C64::new(FRAC_1_SQRT_2, 0.0));
    }
    for w in d.neighbors(v) {
        let h = d.edge(v, w).hadamard;
        if h >= 2 && !d.is_boundary(w) {
            d.remove_all_edges(v, w);
            if h % 2 == 1 {
                d.add_edge(v, w, EdgeType::Hadamard);
            }
            d.mul_scalar(C64::new(0.5f64.powi((h / 2) as i32), 0.0));
        }
    }
}

/// Fuse two Z spiders joined by a plain wire into `u`.
pub fn fuse_spiders(d: &mut Diagram, u: NodeId, v: NodeId) -> Result<(), NotApplicable> {
    if u == v || !is_spider(d, u) || !is_spider(d, v) || d.edge(u, v).plain == 0 {
        return Err(refuse(Rule::Fusion, &[u, v]));
    }
    merge_into(d, u, v);
    normalize_at(d, u);
    Ok(())
}

/// Neighbours `(a, b)` of a removable identity spider.
///
/// The spider must be interior with phase exactly zero and exactly two
/// Hadamard neighbours. When both neighbours touch boundaries the rule is
/// refused, since the merged spider would carry two boundaries.
pub fn identity_match(d: &Diagram, v: NodeId) -> Option<(NodeId, NodeId)> {
    if !is_spider(d, v) || !d.phase(v).is_zero() || !d.is_interior(v) || d.degree(v) != 2 {
        return None;
    }
    let n = d.neighbors(v);
    if n.len() != 2 || n.iter().any(|&w| d.edge(v, w).hadamard != 1) {
        return None;
    }
    let (a, b) = (n[0], n[1]);
    if !d.boundary_neighbors(a).is_empty() && !d.boundary_neighbors(b).is_empty() {
        return None;
    }
    Some((a, b))
}

/// Remove a phase-free degree-two spider and fuse its neighbours.
///
/// The surviving spider is whichever neighbour touches a boundary, or the
/// lower id when neither does.
pub fn remove_identity(d: &mut Diagram, v: NodeId) -> Result<(NodeId, NodeId), NotApplicable> {
    let (a, b) = identity_match(d, v).ok_or_else(|| refuse(Rule::IdentityRemoval, &[v]))?;
    let (keep, gone) = if !d.boundary_neighbors(b).is_empty() { (b, a) } else { (a, b) };
    d.remove_node(v);
    d.add_edge(keep, gone, EdgeType::Plain);
    merge_into(d, keep, gone);
    normalize_at(d, keep);
    Ok((keep, gone))
}

pub fn lcomp_applies(d: &Diagram, v: NodeId) -> bool {
    is_spider(d, v) && d.is_interior(v) && d.phase(v).is_proper_clifford() && d.edge(v, v).is_empty()
}

/// Local complementation about an interior spider of phase ±π/2.
///
/// The spider disappears, the Hadamard wires among its neighbours are
/// complemented and each neighbour's phase drops by the removed phase.
pub fn local_complementation(d: &mut Diagram, v: NodeId) -> Result<(), NotApplicable> {
    if !lcomp_applies(d, v) {
        return Err(refuse(Rule::LocalComplementation, &[v]));
    }
    let a = d.phase(v);
    let nbrs = d.neighbors(v);
    let k = nbrs.len() as i32;
    let mut exp = 1 - k;
    for (i, &x) in nbrs.iter().enumerate() {
        for &y in &nbrs[i + 1..] {
            exp += toggle(d, x, y);
        }
        d.add_to_phase(x, -a);
    }
    let rot = if a == Phase::pi_frac(1, 2) { PI / 4.0 } else { -PI / 4.0 };
    d.mul_scalar(sqrt2_pow(exp) * cis(rot));
    d.remove_node(v);
    Ok(())
}

pub fn pivot_applies(d: &Diagram, u: NodeId, v: NodeId) -> bool {
    u != v
        && is_spider(d, u)
        && is_spider(d, v)
        && d.is_interior(u)
        && d.is_interior(v)
        && d.phase(u).is_pauli()
        && d.phase(v).is_pauli()
        && d.edge(u, v).hadamard == 1
}

/// Pivot along the Hadamard wire `u–v` between two interior Pauli spiders.
///
/// With `A`, `B`, `C` the exclusive neighbours of `u`, of `v`, and the shared
/// ones, the wires across `A×B`, `A×C` and `B×C` are toggled, `B ∪ C` gains
/// the phase of `u`, `A ∪ C` gains the phase of `v`, and `C` gains a further π.
pub fn pivot(d: &mut Diagram, u: NodeId, v: NodeId) -> Result<(), NotApplicable> {
    if !pivot_applies(d, u, v) {
        return Err(refuse(Rule::Pivot, &[u, v]));
    }
    let nu: Vec<NodeId> = d.neighbors(u).into_iter().filter(|&w| w != v).collect();
    let nv: Vec<NodeId> = d.neighbors(v).into_iter().filter(|&w| w != u).collect();
    let a_set: Vec<NodeId> = nu.iter().copied().filter(|w| !nv.contains(w)).collect();
    let b_set: Vec<NodeId> = nv.iter().copied().filter(|w| !nu.contains(w)).collect();
    let c_set: Vec<NodeId> = nu.iter().copied().filter(|w| nv.contains(w)).collect();
    let (pu, pv) = (d.phase(u), d.phase(v));

    let deg_sum = (nu.len() + nv.len() + 2) as i32;
    let mut exp = 2 - (deg_sum - 1);
    for (xs, ys) in [(&a_set, &b_set), (&a_set, &c_set), (&b_set, &c_set)] {
        for &x in xs.iter() {
            for &y in ys.iter() {
                exp += toggle(d, x, y);
            }
        }
    }
    for &w in b_set.iter().chain(&c_set) {
        d.add_to_phase(w, pu);
    }
    for &w in a_set.iter().chain(&c_set) {
        d.add_to_phase(w, pv);
    }
    for &w in &c_set {
        d.add_to_phase(w, Phase::pi());
    }
    let mut k = sqrt2_pow(exp);
    if pu == Phase::pi() && pv == Phase::pi() {
        k = -k;
    }
    d.mul_scalar(k);
    d.remove_node(u);
    d.remove_node(v);
    Ok(())
}

/// The single boundary of `v`, if it has exactly one and no other
/// obstruction to being made interior.
fn single_boundary(d: &Diagram, v: NodeId) -> Option<NodeId> {
    let b = d.boundary_neighbors(v);
    (b.len() == 1 && d.edge(v, b[0]).total() == 1).then(|| b[0])
}

/// Move the boundary wire of `v` onto a fresh phase-free spider.
///
/// `v –t– b` becomes `v –H– w –t'– b` with `t'` the other wire type. The new
/// spider is an identity, so the scalar is unchanged.
fn unfuse_boundary(d: &mut Diagram, v: NodeId, b: NodeId) -> NodeId {
    let t = if d.edge(v, b).hadamard > 0 { EdgeType::Hadamard } else { EdgeType::Plain };
    d.remove_edge(v, b, t);
    let w = d.add_spider(Phase::zero());
    d.add_edge(v, w, EdgeType::Hadamard);
    let flipped = match t {
        EdgeType::Plain => EdgeType::Hadamard,
        EdgeType::Hadamard => EdgeType::Plain,
    };
    d.add_edge(w, b, flipped);
    w
}

pub fn boundary_pivot_applies(d: &Diagram, u: NodeId, v: NodeId) -> bool {
    u != v
        && is_spider(d, u)
        && is_spider(d, v)
        && d.is_interior(u)
        && d.phase(u).is_pauli()
        && d.phase(v).is_pauli()
        && d.edge(u, v).hadamard == 1
        && single_boundary(d, v).is_some()
}

/// Pivot an interior Pauli spider `u` with a Pauli neighbour `v` that has
/// exactly one boundary, after moving that boundary onto a fresh spider.
/// Returns the id of the fresh spider.
pub fn boundary_pivot(d: &mut Diagram, u: NodeId, v: NodeId) -> Result<NodeId, NotApplicable> {
    if !boundary_pivot_applies(d, u, v) {
        return Err(refuse(Rule::BoundaryPivot, &[u, v]));
    }
    let b = single_boundary(d, v).unwrap();
    let w = unfuse_boundary(d, v, b);
    pivot(d, u, v).expect("pivot applies once the boundary is moved");
    Ok(w)
}

pub fn boundary_lcomp_applies(d: &Diagram, u: NodeId, v: NodeId) -> bool {
    u != v
        && is_spider(d, u)
        && is_spider(d, v)
        && d.is_interior(u)
        && d.phase(u).is_pauli()
        && d.phase(v).is_proper_clifford()
        && d.edge(u, v).hadamard == 1
        && single_boundary(d, v).is_some()
}

/// Remove an interior Pauli spider `u` next to a ±π/2 spider `v` with one
/// boundary: move the boundary off `v`, complement about `v` (which turns
/// `u` into a ±π/2 spider) and then about `u`. Returns the fresh spider.
pub fn boundary_lcomp_pair(d: &mut Diagram, u: NodeId, v: NodeId) -> Result<NodeId, NotApplicable> {
    if !boundary_lcomp_applies(d, u, v) {
        return Err(refuse(Rule::BoundaryLcompPair, &[u, v]));
    }
    let b = single_boundary(d, v).unwrap();
    let w = unfuse_boundary(d, v, b);
    local_complementation(d, v).expect("v is interior after unfusing");
    local_complementation(d, u).expect("u became a proper Clifford spider");
    Ok(w)
}

/// A phase gadget: phase-free interior hub with exactly one degree-one leaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    pub hub: NodeId,
    pub leaf: NodeId,
    /// Hub neighbours other than the leaf, ascending.
    pub targets: Vec<NodeId>,
}

pub fn gadget_at(d: &Diagram, hub: NodeId) -> Option<Gadget> {
    if !is_spider(d, hub) || !d.phase(hub).is_zero() || !d.is_interior(hub) {
        return None;
    }
    let nbrs = d.neighbors(hub);
    let leaves: Vec<NodeId> = nbrs
        .iter()
        .copied()
        .filter(|&w| d.degree(w) == 1 && d.edge(hub, w).hadamard == 1)
        .collect();
    if leaves.len() != 1 {
        return None;
    }
    let leaf = leaves[0];
    Some(Gadget { hub, leaf, targets: nbrs.into_iter().filter(|&w| w != leaf).collect() })
}

pub fn gadgets(d: &Diagram) -> Vec<Gadget> {
    d.spider_ids().filter_map(|h| gadget_at(d, h)).collect()
}

fn drop_gadget(d: &mut Diagram, g: &Gadget) {
    d.mul_scalar(sqrt2_pow(1 - g.targets.len() as i32));
    d.remove_node(g.hub);
    d.remove_node(g.leaf);
}

/// Delete a gadget whose leaf phase is exactly zero.
pub fn remove_zero_gadget(d: &mut Diagram, hub: NodeId) -> Result<(), NotApplicable> {
    match gadget_at(d, hub) {
        Some(g) if d.phase(g.leaf).is_zero() => {
            drop_gadget(d, &g);
            Ok(())
        }
        _ => Err(refuse(Rule::GadgetRemoval, &[hub])),
    }
}

/// Merge the gadget at `h2` into the gadget at `h1`; both must act on the
/// same targets.
pub fn merge_gadgets(d: &mut Diagram, h1: NodeId, h2: NodeId) -> Result<(), NotApplicable> {
    match (gadget_at(d, h1), gadget_at(d, h2)) {
        (Some(g1), Some(g2)) if h1 != h2 && g1.targets == g2.targets => {
            let p = d.phase(g2.leaf);
            d.add_to_phase(g1.leaf, p);
            drop_gadget(d, &g2);
            Ok(())
        }
        _ => Err(refuse(Rule::GadgetFusion, &[h1, h2])),
    }
}

/// Merge every group of gadgets with identical targets and delete gadgets
/// of phase zero. Returns the number of rewrites performed.
pub fn fuse_phase_gadgets(d: &mut Diagram) -> usize {
    let mut count = 0;
    while let Some(step) = next_gadget_step(d) {
        match step {
            GadgetStep::Merge(h1, h2) => merge_gadgets(d, h1, h2).expect("matched gadgets merge"),
            GadgetStep::Remove(h) => remove_zero_gadget(d, h).expect("matched gadget removes"),
        }
        count += 1;
    }
    count
}

pub(crate) enum GadgetStep {
    Merge(NodeId, NodeId),
    Remove(NodeId),
}

pub(crate) fn next_gadget_step(d: &Diagram) -> Option<GadgetStep> {
    let gs = gadgets(d);
    for (i, g1) in gs.iter().enumerate() {
        if let Some(g2) = gs[i + 1..].iter().find(|g2| g2.targets == g1.targets) {
            return Some(GadgetStep::Merge(g1.hub, g2.hub));
        }
    }
    gs.iter().find(|g| d.phase(g.leaf).is_zero()).map(|g| GadgetStep::Remove(g.hub))
}

/// Delete a spider with no wires, folding `1 + e^{iα}` into the scalar.
/// Refused at phase π, where the diagram is zero.
pub fn remove_isolated(d: &mut Diagram, v: NodeId) -> Result<(), NotApplicable> {
    if !is_spider(d, v) || d.degree(v) != 0 || d.phase(v) == Phase::pi() {
        return Err(refuse(Rule::IsolatedSpider, &[v]));
    }
    d.mul_scalar(C64::one() + cis(d.phase(v).radians()));
    d.remove_node(v);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zx::evaluate;

    fn assert_same_map(before: &Diagram, after: &Diagram) {
        let (a, b) = (evaluate(before).unwrap(), evaluate(after).unwrap());
        let diff = a.max_abs_diff(&b);
        assert!(diff < 1e-10, "map changed by {diff}\nbefore:\n{before}\nafter:\n{after}");
    }

    /// Spiders with the given phases, each with a boundary when flagged,
    /// joined by Hadamard wires.
    fn graph(phases: &[Phase], edges: &[(usize, usize)], boundary: &[usize]) -> (Diagram, Vec<NodeId>) {
        let mut d = Diagram::new();
        let ids: Vec<NodeId> = phases.iter().map(|&p| d.add_spider(p)).collect();
        for &(a, b) in edges {
            d.add_edge(ids[a], ids[b], EdgeType::Hadamard);
        }
        for (k, &i) in boundary.iter().enumerate() {
            let o = if k % 2 == 0 { d.add_output() } else { d.add_input() };
            d.add_edge(ids[i], o, EdgeType::Plain);
        }
        (d, ids)
    }

    #[test]
    fn fusion_adds_phases() {
        let mut d = Diagram::new();
        let (i, o) = (d.add_input(), d.add_output());
        let a = d.add_spider(Phase::pi_frac(1, 4));
        let b = d.add_spider(Phase::pi_frac(1, 4));
        d.add_edge(i, a, EdgeType::Plain);
        d.add_edge(a, b, EdgeType::Plain);
        d.add_edge(b, o, EdgeType::Hadamard);
        let before = d.clone();
        fuse_spiders(&mut d, a, b).unwrap();
        assert_eq!(d.phase(a), Phase::pi_frac(1, 2));
        assert_same_map(&before, &d);
    }

    #[test]
    fn fusion_cancels_opposite_phases() {
        let mut d = Diagram::new();
        let a = d.add_spider(Phase::from_radians(0.3));
        let b = d.add_spider(Phase::from_radians(-0.3));
        d.add_edge(a, b, EdgeType::Plain);
        fuse_spiders(&mut d, a, b).unwrap();
        assert!(d.phase(a).approx_eq(&Phase::zero(), 1e-12));
    }

    #[test]
    fn fusion_needs_a_plain_wire() {
        let (mut d, ids) = graph(&[Phase::zero(), Phase::zero()], &[(0, 1)], &[]);
        assert!(fuse_spiders(&mut d, ids[0], ids[1]).is_err());
    }

    #[test]
    fn lcomp_on_a_triangle() {
        let half = Phase::pi_frac(1, 2);
        let (mut d, ids) = graph(&[half, Phase::zero(), Phase::zero()], &[(0, 1), (0, 2), (1, 2)], &[1, 2]);
        let before = d.clone();
        local_complementation(&mut d, ids[0]).unwrap();
        assert!(!d.contains(ids[0]));
        assert!(!d.connected(ids[1], ids[2]));
        assert_eq!(d.phase(ids[1]), Phase::pi_frac(-1, 2));
        assert_eq!(d.phase(ids[2]), Phase::pi_frac(-1, 2));
        assert_same_map(&before, &d);
    }

    #[test]
    fn lcomp_scalar_for_both_signs_and_mixed_toggles() {
        for p in [Phase::pi_frac(1, 2), Phase::pi_frac(3, 2)] {
            let phases = [p, Phase::pi_frac(1, 4), Phase::zero(), Phase::pi(), Phase::pi_frac(3, 4)];
            let (mut d, ids) = graph(&phases, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (3, 4)], &[1, 2, 3, 4]);
            let before = d.clone();
            local_complementation(&mut d, ids[0]).unwrap();
            assert_eq!(d.num_spiders(), 4);
            assert_same_map(&before, &d);
        }
    }

    #[test]
    fn lcomp_refuses_boundary_spiders_and_non_clifford_phases() {
        let (mut d, ids) = graph(&[Phase::pi_frac(1, 2), Phase::zero()], &[(0, 1)], &[0]);
        assert!(local_complementation(&mut d, ids[0]).is_err());
        let (mut d, ids) = graph(&[Phase::pi_frac(1, 4), Phase::zero()], &[(0, 1)], &[1]);
        assert!(local_complementation(&mut d, ids[0]).is_err());
        let (mut d, ids) = graph(&[Phase::from_radians(PI / 2.0), Phase::zero()], &[(0, 1)], &[1]);
        assert!(local_complementation(&mut d, ids[0]).is_err());
    }

    #[test]
    fn pivot_on_a_path_joins_the_ends() {
        let z = Phase::zero();
        let (mut d, ids) = graph(&[z, z, z, z], &[(0, 1), (1, 2), (2, 3)], &[0, 3]);
        let before = d.clone();
        pivot(&mut d, ids[1], ids[2]).unwrap();
        assert_eq!(d.num_spiders(), 2);
        assert!(d.connected(ids[0], ids[3]));
        assert_same_map(&before, &d);
    }

    #[test]
    fn pivot_scalar_with_shared_neighbours_and_pi_phases() {
        let cases: [(Phase, Phase); 3] =
            [(Phase::pi(), Phase::pi()), (Phase::zero(), Phase::pi()), (Phase::pi(), Phase::zero())];
        for (pu, pv) in cases {
            // u=0, v=1, A={2}, B={3,4}, C={5}; existing A–B wire 2–3
            let phases = [pu, pv, Phase::pi_frac(1, 4), Phase::pi_frac(1, 2), Phase::zero(), Phase::pi_frac(3, 4)];
            let edges = [(0, 1), (0, 2), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (4, 5)];
            let (mut d, ids) = graph(&phases, &edges, &[2, 3, 4, 5]);
            let before = d.clone();
            pivot(&mut d, ids[0], ids[1]).unwrap();
            assert_eq!(d.num_spiders(), 4);
            assert_same_map(&before, &d);
        }
    }

    #[test]
    fn identity_removal_merges_neighbours() {
        let (mut d, ids) = graph(
            &[Phase::pi_frac(1, 4), Phase::zero(), Phase::pi_frac(1, 8), Phase::zero()],
            &[(0, 1), (1, 2), (0, 3), (2, 3)],
            &[0, 3],
        );
        let before = d.clone();
        let (keep, gone) = remove_identity(&mut d, ids[1]).unwrap();
        assert_eq!((keep, gone), (ids[0], ids[2]));
        assert_eq!(d.phase(ids[0]), Phase::pi_frac(3, 8));
        assert!(d.edge(ids[0], ids[3]).is_empty(), "parallel wires cancel");
        assert_same_map(&before, &d);
    }

    #[test]
    fn boundary_pivot_removes_one_spider_net() {
        let z = Phase::zero();
        let (mut d, ids) = graph(&[z, Phase::pi(), z, Phase::pi_frac(1, 4)], &[(0, 1), (0, 2), (1, 3)], &[1, 2, 3]);
        let before = d.clone();
        boundary_pivot(&mut d, ids[0], ids[1]).unwrap();
        assert_eq!(d.num_spiders(), before.num_spiders() - 1);
        assert_same_map(&before, &d);
    }

    #[test]
    fn boundary_lcomp_pair_removes_one_spider_net() {
        let (mut d, ids) = graph(
            &[Phase::pi(), Phase::pi_frac(3, 2), Phase::pi_frac(1, 4), Phase::pi_frac(1, 8)],
            &[(0, 1), (0, 2), (1, 3), (0, 3)],
            &[1, 2, 3],
        );
        let before = d.clone();
        boundary_lcomp_pair(&mut d, ids[0], ids[1]).unwrap();
        assert_eq!(d.num_spiders(), before.num_spiders() - 1);
        assert_same_map(&before, &d);
    }

    fn two_gadgets(p1: Phase, p2: Phase) -> (Diagram, Vec<NodeId>) {
        // targets 0,1 ; hubs 2,4 ; leaves 3,5
        let z = Phase::zero();
        graph(&[z, z, z, p1, z, p2], &[(0, 2), (1, 2), (2, 3), (0, 4), (1, 4), (4, 5), (0, 1)], &[0, 1, 0, 1])
    }

    #[test]
    fn gadgets_on_the_same_targets_merge() {
        let q = Phase::pi_frac(1, 4);
        let (mut d, ids) = two_gadgets(q, q);
        let before = d.clone();
        assert_eq!(fuse_phase_gadgets(&mut d), 1);
        assert_eq!(d.phase(ids[3]), Phase::pi_frac(1, 2));
        assert!(!d.contains(ids[4]) && !d.contains(ids[5]));
        assert_same_map(&before, &d);
    }

    #[test]
    fn cancelling_gadgets_vanish() {
        let (mut d, _) = two_gadgets(Phase::pi_frac(1, 4), Phase::pi_frac(-1, 4));
        let before = d.clone();
        assert_eq!(fuse_phase_gadgets(&mut d), 2);
        assert_eq!(d.num_spiders(), 2);
        assert_same_map(&before, &d);
    }

    #[test]
    fn isolated_spider_becomes_a_scalar() {
        let mut d = Diagram::new();
        let v = d.add_spider(Phase::pi_frac(1, 2));
        let before = d.clone();
        remove_isolated(&mut d, v).unwrap();
        assert_eq!(d.num_nodes(), 0);
        assert_same_map(&before, &d);
    }
}
