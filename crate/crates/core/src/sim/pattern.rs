//! Executing measurement patterns.
//!
//! [`run_pattern`] postselects every measurement on outcome 0 and returns
//! the induced linear map, which equals the pattern's map up to a scalar.
//! Vertices enter the register only when a measurement needs them, so the
//! register width tracks the pattern's frontier rather than its size.
//!
//! [`sample_with_feedforward`] runs single-row chains with random outcomes,
//! adapting each angle to the Pauli frame accumulated so far.

use std::collections::BTreeSet;

use rand::Rng;

use super::state::{equatorial, StateVector, ZERO_BRANCH_TOL};
use super::SimError;
use crate::linalg::{gates, LinearMap, C64};
use crate::mgraph::{angle_radians, MGraph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PatternLimits {
    /// Most qubits the register may hold at once.
    pub max_live: usize,
}

impl Default for PatternLimits {
    fn default() -> Self {
        PatternLimits { max_live: 20 }
    }
}

fn measurement_angle(m: &MGraph, v: VertexId) -> f64 {
    angle_radians(m.vertex(v).expect("vertex exists")).expect("measured vertex has an angle")
}

struct Register<'a> {
    m: &'a MGraph,
    state: StateVector,
    live: BTreeSet<VertexId>,
    added: BTreeSet<VertexId>,
    column: usize,
    cap: usize,
}

impl Register<'_> {
    fn ensure(&mut self, v: VertexId) -> Result<(), SimError> {
        if self.added.contains(&v) {
            return Ok(());
        }
        if self.live.len() + 1 > self.cap {
            return Err(SimError::TooLarge { what: "live pattern register", size: self.live.len() + 1, cap: self.cap });
        }
        let fresh = match self.m.inputs.iter().position(|&i| i == v) {
            Some(k) => {
                let bit = self.column >> (self.m.inputs.len() - 1 - k) & 1;
                let mut amps = vec![C64::new(0.0, 0.0); 2];
                amps[bit] = C64::new(1.0, 0.0);
                StateVector::from_amplitudes(vec![v], amps)
            }
            None => StateVector::plus(&[v])?,
        };
        self.state = self.state.tensor(&fresh)?;
        for w in self.m.neighbors(v) {
            if self.live.contains(&w) {
                let (p, q) = (self.state.position(v).unwrap(), self.state.position(w).unwrap());
                self.state.apply_cz(p, q);
            }
        }
        self.live.insert(v);
        self.added.insert(v);
        Ok(())
    }
}

/// Postselected execution with the default width cap.
pub fn run_pattern(m: &MGraph) -> Result<LinearMap, SimError> {
    run_pattern_with(m, PatternLimits::default())
}

/// The map `⟨+_α|…⟨+_α| E |in⟩` of the pattern, column by column.
///
/// Rows are indexed by the outputs and columns by the inputs, in the order
/// the pattern lists them.
pub fn run_pattern_with(m: &MGraph, limits: PatternLimits) -> Result<LinearMap, SimError> {
    let (ni, no) = (m.inputs.len(), m.outputs.len());
    let mut out = LinearMap::zeros(1 << no, 1 << ni);
    for column in 0..(1usize << ni) {
        let mut reg = Register {
            m,
            state: StateVector::unit(),
            live: BTreeSet::new(),
            added: BTreeSet::new(),
            column,
            cap: limits.max_live,
        };
        for &v in &m.order {
            reg.ensure(v)?;
            for w in m.neighbors(v) {
                reg.ensure(w)?;
            }
            let pos = reg.state.position(v).unwrap();
            reg.state = reg.state.project(pos, equatorial(measurement_angle(m, v), 0));
            reg.live.remove(&v);
        }
        for &o in &m.outputs {
            reg.ensure(o)?;
        }
        let mut state = reg.state.permuted(&m.outputs)?;
        for &q in &m.output_z {
            state.apply_z(q);
        }
        for (row, a) in state.amplitudes().iter().enumerate() {
            *out.raw_mut(row, column) = *a;
        }
    }
    Ok(out)
}

/// Outcome of one feed-forward run.
#[derive(Clone, Debug)]
pub struct FeedforwardRun {
    /// Normalized, corrected output state on the output vertex.
    pub state: StateVector,
    /// Raw outcome of every measurement, in execution order.
    pub outcomes: Vec<u8>,
}

/// The vertices of a single-row chain from its input to its output, or
/// [`SimError::NotAChain`].
pub fn chain_path(m: &MGraph) -> Result<Vec<VertexId>, SimError> {
    if m.inputs.len() != 1 || m.outputs.len() != 1 {
        return Err(SimError::NotAChain);
    }
    let (start, end) = (m.inputs[0], m.outputs[0]);
    let mut path = vec![start];
    let mut prev: Option<VertexId> = None;
    let mut cur = start;
    while cur != end {
        let next: Vec<VertexId> = m.neighbors(cur).into_iter().filter(|&w| Some(w) != prev).collect();
        if next.len() != 1 {
            return Err(SimError::NotAChain);
        }
        prev = Some(cur);
        cur = next[0];
        path.push(cur);
        if path.len() > m.num_vertices() {
            return Err(SimError::NotAChain);
        }
    }
    let measured = &path[..path.len() - 1];
    if path.len() != m.num_vertices() || m.num_edges() != path.len() - 1 || m.order != measured {
        return Err(SimError::NotAChain);
    }
    Ok(path)
}

/// Run a chain pattern on `input` with random outcomes and Pauli-frame
/// feed-forward.
///
/// The frame `(x, z)` means the register holds `X^x Z^z` applied to the
/// ideal state. A vertex is measured at `(-1)^x α`; its effective outcome is
/// the raw outcome XOR `z`, and the frame becomes `(effective, x)`. The
/// final frame is undone on the output, followed by the pattern's own output
/// correction.
pub fn sample_with_feedforward<R: Rng + ?Sized>(
    m: &MGraph,
    input: [C64; 2],
    rng: &mut R,
) -> Result<FeedforwardRun, SimError> {
    let path = chain_path(m)?;
    let mut state = StateVector::from_amplitudes(vec![path[0]], input.to_vec()).normalized()?;
    let (mut x, mut z) = (0u8, 0u8);
    let mut outcomes = Vec::with_capacity(path.len() - 1);
    for pair in path.windows(2) {
        let (v, w) = (pair[0], pair[1]);
        state.add_plus(w)?;
        let (p, q) = (state.position(v).unwrap(), state.position(w).unwrap());
        state.apply_cz(p, q);
        let alpha = measurement_angle(m, v);
        let beta = if x == 1 { -alpha } else { alpha };
        let pos = state.position(v).unwrap();
        let b0 = state.project(pos, equatorial(beta, 0));
        let b1 = state.project(pos, equatorial(beta, 1));
        let p0 = b0.norm().powi(2) / (b0.norm().powi(2) + b1.norm().powi(2));
        let raw = if rng.gen::<f64>() < p0 { 0u8 } else { 1u8 };
        let branch = if raw == 0 { b0 } else { b1 };
        if branch.norm() <= ZERO_BRANCH_TOL {
            return Err(SimError::ZeroBranch);
        }
        state = branch.normalized()?;
        outcomes.push(raw);
        let effective = raw ^ z;
        (x, z) = (effective, x);
    }
    if x == 1 {
        state.apply_1q(0, &gates::pauli_x());
    }
    if z == 1 {
        state.apply_z(0);
    }
    if m.output_z.contains(&0) {
        state.apply_z(0);
    }
    Ok(FeedforwardRun { state, outcomes })
}
