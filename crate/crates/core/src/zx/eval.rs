//! Dense evaluation of diagrams by variable elimination.
//!
//! Every node owns one binary variable. A Z spider contributes the unary
//! factor `[1, e^{iα}]`; an X spider contributes the same factor but sees
//! each of its legs through a Hadamard. Every wire contributes a pairwise
//! factor. Spider variables are summed out in min-degree order, after which
//! the remaining factor over the boundary variables is the diagram's matrix.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_1_SQRT_2;

use num::{One, Zero};
use thiserror::Error;

use super::diagram::{Diagram, EdgeType, NodeId, NodeKind};
use crate::linalg::{cis, LinearMap, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalLimits {
    /// Largest number of variables any intermediate factor may carry.
    pub max_width: usize,
}

impl Default for EvalLimits {
    fn default() -> Self {
        EvalLimits { max_width: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("contraction needs a factor over {width} variables, above the cap of {cap}")]
    TooWide { width: usize, cap: usize },
}

#[derive(Clone, Debug)]
struct Factor {
    /// Sorted; `vars[0]` is the most significant bit of a table index.
    vars: Vec<NodeId>,
    table: Vec<C64>,
}

impl Factor {
    fn scalar(x: C64) -> Self {
        Factor { vars: Vec::new(), table: vec![x] }
    }
}

/// Multiply `factors` together and sum out `eliminate` if given.
fn combine(factors: &[Factor], eliminate: Option<NodeId>, cap: usize) -> Result<Factor, EvalError> {
    let union: Vec<NodeId> =
        factors.iter().flat_map(|f| f.vars.iter().copied()).collect::<BTreeSet<_>>().into_iter().collect();
    let kept: Vec<NodeId> = union.iter().copied().filter(|&v| Some(v) != eliminate).collect();
    if kept.len() > cap {
        return Err(EvalError::TooWide { width: kept.len(), cap });
    }
    let k = union.len();
    // bit positions of each factor's variables inside the union assignment
    let shifts: Vec<Vec<usize>> = factors
        .iter()
        .map(|f| f.vars.iter().map(|v| k - 1 - union.binary_search(v).unwrap()).collect())
        .collect();
    let elim_shift = eliminate.and_then(|v| union.binary_search(&v).ok()).map(|p| k - 1 - p);
    let mut table = vec![C64::zero(); 1 << kept.len()];
    for a in 0..(1usize << k) {
        let mut prod = C64::one();
        for (f, sh) in factors.iter().zip(&shifts) {
            let mut idx = 0usize;
            for &s in sh {
                idx = (idx << 1) | (a >> s & 1);
            }
            prod *= f.table[idx];
            if prod == C64::zero() {
                break;
            }
        }
        let out = match elim_shift {
            Some(s) => ((a >> (s + 1)) << s) | (a & ((1 << s) - 1)),
            None => a,
        };
        table[out] += prod;
    }
    Ok(Factor { vars: kept, table })
}

fn leg_matrix(kind: NodeKind) -> [[f64; 2]; 2] {
    match kind {
        NodeKind::X => [[FRAC_1_SQRT_2, FRAC_1_SQRT_2], [FRAC_1_SQRT_2, -FRAC_1_SQRT_2]],
        _ => [[1.0, 0.0], [0.0, 1.0]],
    }
}

/// `(Lᵤᵀ·E·Lᵥ)[xᵤ][xᵥ]`.
fn wire_entry(lu: &[[f64; 2]; 2], e: EdgeType, lv: &[[f64; 2]; 2], xu: usize, xv: usize) -> f64 {
    let h = FRAC_1_SQRT_2;
    let em = match e {
        EdgeType::Plain => [[1.0, 0.0], [0.0, 1.0]],
        EdgeType::Hadamard => [[h, h], [h, -h]],
    };
    let mut acc = 0.0;
    for (yu, row) in em.iter().enumerate() {
        for (yv, &ev) in row.iter().enumerate() {
            acc += lu[yu][xu] * ev * lv[yv][xv];
        }
    }
    acc
}

fn build_factors(d: &Diagram) -> Vec<Factor> {
    let mut factors = Vec::new();
    for v in d.node_ids() {
        let n = d.node(v);
        if n.kind != NodeKind::Boundary {
            factors.push(Factor { vars: vec![v], table: vec![C64::one(), cis(n.phase.radians())] });
        }
    }
    for (u, v, ty) in d.edges() {
        let (lu, lv) = (leg_matrix(d.kind(u)), leg_matrix(d.kind(v)));
        if u == v {
            let table = (0..2).map(|x| C64::new(wire_entry(&lu, ty, &lv, x, x), 0.0)).collect();
            factors.push(Factor { vars: vec![u], table });
        } else {
            let (a, b, la, lb) = if u < v { (u, v, lu, lv) } else { (v, u, lv, lu) };
            let mut table = Vec::with_capacity(4);
            for xa in 0..2 {
                for xb in 0..2 {
                    table.push(C64::new(wire_entry(&la, ty, &lb, xa, xb), 0.0));
                }
            }
            factors.push(Factor { vars: vec![a, b], table });
        }
    }
    factors
}

/// The linear map of `d`, with the diagram scalar in [`LinearMap::scalar`].
///
/// Rows are indexed by output values and columns by input values, the first
/// listed boundary being the most significant bit.
pub fn evaluate_with(d: &Diagram, limits: EvalLimits) -> Result<LinearMap, EvalError> {
    let mut factors = build_factors(d);
    let open: BTreeSet<NodeId> = d.inputs().iter().chain(d.outputs()).copied().collect();
    let mut remaining: BTreeSet<NodeId> = d.node_ids().filter(|v| !open.contains(v)).collect();

    while !remaining.is_empty() {
        // min-degree choice: fewest distinct co-occurring variables
        let mut best: Option<(usize, NodeId)> = None;
        for &v in &remaining {
            let mut nb = BTreeSet::new();
            for f in factors.iter().filter(|f| f.vars.contains(&v)) {
                nb.extend(f.vars.iter().copied());
            }
            let deg = nb.len();
            if best.is_none_or(|(bd, _)| deg < bd) {
                best = Some((deg, v));
            }
        }
        let (_, v) = best.unwrap();
        remaining.remove(&v);
        let (with_v, rest): (Vec<Factor>, Vec<Factor>) = factors.into_iter().partition(|f| f.vars.contains(&v));
        factors = rest;
        factors.push(combine(&with_v, Some(v), limits.max_width)?);
    }

    // fold constants first so the final product stays small
    let (consts, open_factors): (Vec<Factor>, Vec<Factor>) = factors.into_iter().partition(|f| f.vars.is_empty());
    let constant: C64 = consts.iter().map(|f| f.table[0]).product();
    let mut all = open_factors;
    all.push(Factor::scalar(constant));
    let joint = combine(&all, None, limits.max_width.max(open.len()))?;

    let (ni, no) = (d.inputs().len(), d.outputs().len());
    let mut m = LinearMap::zeros(1 << no, 1 << ni);
    let order: Vec<NodeId> = d.outputs().iter().chain(d.inputs()).copied().collect();
    for a in 0..(1usize << (ni + no)) {
        let mut sorted_assignment = 0usize;
        // translate an (outputs, inputs) assignment to the joint factor's order
        let mut value = Vec::with_capacity(joint.vars.len());
        for &var in &joint.vars {
            let pos = order.iter().position(|&x| x == var).expect("open variable");
            value.push(a >> (ni + no - 1 - pos) & 1);
        }
        for bit in value {
            sorted_assignment = (sorted_assignment << 1) | bit;
        }
        let entry = if joint.vars.is_empty() { joint.table[0] } else { joint.table[sorted_assignment] };
        *m.raw_mut(a >> ni, a & ((1 << ni) - 1)) = entry;
    }
    m.scalar = d.scalar;
    Ok(m)
}

pub fn evaluate(d: &Diagram) -> Result<LinearMap, EvalError> {
    evaluate_with(d, EvalLimits::default())
}
