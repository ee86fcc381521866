//! Rewriting graph-like diagrams towards fewer spiders.
//!
//! [`simplify`] applies the rules of [`rules`] until none matches. Each
//! firing deletes at least one spider, which bounds the run by the initial
//! spider count; a configurable firing cap guards against bugs regardless.

pub mod rules;

use std::fmt;

use thiserror::Error;

use crate::phase::Phase;
use crate::zx::{check_graph_like, Diagram, EdgeType, NodeId};

pub use rules::{
    boundary_lcomp_pair, boundary_pivot, fuse_phase_gadgets, fuse_spiders, gadgets, local_complementation,
    merge_gadgets, pivot, remove_identity, remove_isolated, remove_zero_gadget, Gadget,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Fusion,
    IdentityRemoval,
    LocalComplementation,
    Pivot,
    BoundaryPivot,
    BoundaryLcompPair,
    GadgetFusion,
    GadgetRemoval,
    IsolatedSpider,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Fusion => "fusion",
            Rule::IdentityRemoval => "identity-removal",
            Rule::LocalComplementation => "local-complementation",
            Rule::Pivot => "pivot",
            Rule::BoundaryPivot => "boundary-pivot",
            Rule::BoundaryLcompPair => "boundary-lcomp-pair",
            Rule::GadgetFusion => "gadget-fusion",
            Rule::GadgetRemoval => "gadget-removal",
            Rule::IsolatedSpider => "isolated-spider",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("rule `{rule}` does not apply at {at:?}")]
pub struct NotApplicable {
    pub rule: Rule,
    pub at: Vec<NodeId>,
}

/// One rule application, recorded with the phases the spiders had before.
#[derive(Clone, Debug, PartialEq)]
pub struct RuleFiring {
    pub rule: Rule,
    pub spiders: Vec<NodeId>,
    pub phases: Vec<Phase>,
}

impl fmt::Display for RuleFiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.spiders.iter().zip(&self.phases).map(|(s, p)| format!("{s}:{p}")).collect();
        write!(f, "{} {}", self.rule, parts.join(" "))
    }
}

/// Termination measure, compared lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Measure {
    pub spiders: usize,
    pub hadamard_edges: usize,
    /// Number of spiders whose phase is an exact multiple of π/2.
    pub clifford_mass: usize,
}

pub fn measure(d: &Diagram) -> Measure {
    Measure {
        spiders: d.num_spiders(),
        hadamard_edges: d.num_hadamard_edges(),
        clifford_mass: d.spider_ids().filter(|&v| d.phase(v).is_clifford()).count(),
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimplifyError {
    #[error("input is not graph-like: {0}")]
    NotGraphLike(String),
    #[error("gave up after {cap} rule firings; last rule was {last}")]
    FiringCap { cap: usize, last: String },
    #[error("rule {rule} did not decrease the termination measure")]
    NotDecreasing { rule: Rule },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimplifyOptions {
    pub max_firings: usize,
}

impl Default for SimplifyOptions {
    fn default() -> Self {
        SimplifyOptions { max_firings: 10_000 }
    }
}

/// Result of a simplification run.
#[derive(Clone, Debug)]
pub struct Simplified {
    pub diagram: Diagram,
    pub trace: Vec<RuleFiring>,
}

fn snapshot(d: &Diagram, rule: Rule, spiders: &[NodeId]) -> RuleFiring {
    RuleFiring { rule, spiders: spiders.to_vec(), phases: spiders.iter().map(|&v| d.phase(v)).collect() }
}

/// Find and apply the first applicable rewrite in scheduling order.
fn step(d: &mut Diagram) -> Option<RuleFiring> {
    let plain = d.edges().into_iter().find(|&(u, v, t)| {
        t == EdgeType::Plain && u != v && !d.is_boundary(u) && !d.is_boundary(v)
    });
    if let Some((u, v, _)) = plain {
        let f = snapshot(d, Rule::Fusion, &[u, v]);
        fuse_spiders(d, u, v).ok()?;
        return Some(f);
    }

    let spiders: Vec<NodeId> = d.spider_ids().collect();
    for &v in &spiders {
        if let Some((a, b)) = rules::identity_match(d, v) {
            let f = snapshot(d, Rule::IdentityRemoval, &[v, a, b]);
            remove_identity(d, v).ok()?;
            return Some(f);
        }
    }
    for &v in &spiders {
        if rules::lcomp_applies(d, v) {
            let f = snapshot(d, Rule::LocalComplementation, &[v]);
            local_complementation(d, v).ok()?;
            return Some(f);
        }
    }
    for &u in &spiders {
        for v in d.neighbors(u).into_iter().filter(|&v| v > u) {
            if rules::pivot_applies(d, u, v) {
                let f = snapshot(d, Rule::Pivot, &[u, v]);
                pivot(d, u, v).ok()?;
                return Some(f);
            }
        }
    }
    for &u in &spiders {
        for v in d.neighbors(u) {
            if rules::boundary_pivot_applies(d, u, v) {
                let f = snapshot(d, Rule::BoundaryPivot, &[u, v]);
                boundary_pivot(d, u, v).ok()?;
                return Some(f);
            }
        }
    }
    for &u in &spiders {
        for v in d.neighbors(u) {
            if rules::boundary_lcomp_applies(d, u, v) {
                let f = snapshot(d, Rule::BoundaryLcompPair, &[u, v]);
                boundary_lcomp_pair(d, u, v).ok()?;
                return Some(f);
            }
        }
    }
    match rules::next_gadget_step(d) {
        Some(rules::GadgetStep::Merge(h1, h2)) => {
            let g1 = rules::gadget_at(d, h1)?;
            let g2 = rules::gadget_at(d, h2)?;
            let f = snapshot(d, Rule::GadgetFusion, &[h1, g1.leaf, h2, g2.leaf]);
            merge_gadgets(d, h1, h2).ok()?;
            return Some(f);
        }
        Some(rules::GadgetStep::Remove(h)) => {
            let g = rules::gadget_at(d, h)?;
            let f = snapshot(d, Rule::GadgetRemoval, &[h, g.leaf]);
            remove_zero_gadget(d, h).ok()?;
            return Some(f);
        }
        None => {}
    }
    for &v in &spiders {
        if d.contains(v) && d.degree(v) == 0 && d.phase(v) != Phase::pi() {
            let f = snapshot(d, Rule::IsolatedSpider, &[v]);
            remove_isolated(d, v).ok()?;
            return Some(f);
        }
    }
    None
}

/// Callback receiving each firing with the diagram before and after it.
pub type Observer<'a> = &'a mut dyn FnMut(&RuleFiring, &Diagram, &Diagram);

/// Rewrite to a fixpoint, calling `observer(firing, before, after)` after
/// every firing. The observer clones the diagram only when supplied.
pub fn simplify_observed(
    d: &Diagram,
    opts: SimplifyOptions,
    mut observer: Option<Observer<'_>>,
) -> Result<Simplified, SimplifyError> {
    check_graph_like(d).map_err(SimplifyError::NotGraphLike)?;
    let mut d = d.clone();
    let mut trace: Vec<RuleFiring> = Vec::new();
    loop {
        let before_measure = measure(&d);
        let before = observer.as_ref().map(|_| d.clone());
        let Some(firing) = step(&mut d) else { break };
        if measure(&d) >= before_measure {
            return Err(SimplifyError::NotDecreasing { rule: firing.rule });
        }
        if let (Some(obs), Some(before)) = (observer.as_mut(), before.as_ref()) {
            obs(&firing, before, &d);
        }
        if trace.len() >= opts.max_firings {
            return Err(SimplifyError::FiringCap { cap: opts.max_firings, last: firing.to_string() });
        }
        trace.push(firing);
    }
    Ok(Simplified { diagram: d, trace })
}

pub fn simplify(d: &Diagram) -> Result<Simplified, SimplifyError> {
    simplify_observed(d, SimplifyOptions::default(), None)
}

/// Interior spiders that are neither non-Clifford nor gadget hubs.
pub fn interior_clifford_spiders(d: &Diagram) -> Vec<NodeId> {
    let hubs: Vec<NodeId> = gadgets(d).iter().map(|g| g.hub).collect();
    d.spider_ids().filter(|&v| d.is_interior(v) && d.phase(v).is_clifford() && !hubs.contains(&v)).collect()
}
