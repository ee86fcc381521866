use std::f64::consts::FRAC_1_SQRT_2;

use num::{One, Zero};

use super::SimError;
use crate::linalg::{cis, LinearMap, C64};

/// Largest register a [`StateVector`] may hold.
pub const STATE_QUBIT_CAP: usize = 20;

/// Largest graph handed to [`graph_state`].
pub const GRAPH_STATE_CAP: usize = 14;

/// Tolerance below which a projected branch counts as impossible.
pub const ZERO_BRANCH_TOL: f64 = 1e-12;

/// A dense, possibly unnormalized, pure state.
///
/// Every qubit position carries a label so that states can be compared and
/// fused after measurements have removed qubits. Position 0 is the most
/// significant bit of the amplitude index. Projections never renormalize;
/// call [`StateVector::normalized`] explicitly when a unit vector is wanted.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    labels: Vec<usize>,
    amps: Vec<C64>,
}

/// Equatorial basis vector `(|0⟩ + (-1)^m e^{iα}|1⟩)/√2`.
pub fn equatorial(alpha: f64, m: u8) -> [C64; 2] {
    let sign = if m == 0 { 1.0 } else { -1.0 };
    [C64::new(FRAC_1_SQRT_2, 0.0), cis(alpha) * sign * FRAC_1_SQRT_2]
}

impl StateVector {
    /// The empty register, amplitude one.
    pub fn unit() -> Self {
        StateVector { labels: Vec::new(), amps: vec![C64::one()] }
    }

    pub fn from_amplitudes(labels: Vec<usize>, amps: Vec<C64>) -> Self {
        assert_eq!(amps.len(), 1 << labels.len(), "amplitude count must be 2^n");
        StateVector { labels, amps }
    }

    /// `|+⟩^⊗n` over the given labels.
    pub fn plus(labels: &[usize]) -> Result<Self, SimError> {
        let n = labels.len();
        if n > STATE_QUBIT_CAP {
            return Err(SimError::TooLarge { what: "state", size: n, cap: STATE_QUBIT_CAP });
        }
        let a = C64::new((0.5f64).powf(n as f64 / 2.0), 0.0);
        Ok(StateVector { labels: labels.to_vec(), amps: vec![a; 1 << n] })
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn position(&self, label: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    fn bit(&self, pos: usize) -> usize {
        self.num_qubits() - 1 - pos
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&mut self, k: C64) {
        for a in &mut self.amps {
            *a *= k;
        }
    }

    pub fn normalized(&self) -> Result<Self, SimError> {
        let n = self.norm();
        if n <= ZERO_BRANCH_TOL {
            return Err(SimError::ZeroBranch);
        }
        let mut s = self.clone();
        s.scale(C64::new(1.0 / n, 0.0));
        Ok(s)
    }

    /// `self ⊗ other`; `self` keeps the more significant positions.
    pub fn tensor(&self, other: &StateVector) -> Result<Self, SimError> {
        let n = self.num_qubits() + other.num_qubits();
        if n > STATE_QUBIT_CAP {
            return Err(SimError::TooLarge { what: "state", size: n, cap: STATE_QUBIT_CAP });
        }
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        let mut amps = Vec::with_capacity(1 << n);
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(StateVector { labels, amps })
    }

    /// Append one qubit in `|+⟩` with the given label.
    pub fn add_plus(&mut self, label: usize) -> Result<(), SimError> {
        *self = self.tensor(&StateVector::plus(&[label])?)?;
        Ok(())
    }

    pub fn apply_1q(&mut self, pos: usize, m: &LinearMap) {
        let bit = 1usize << self.bit(pos);
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m.get(0, 0) * a0 + m.get(0, 1) * a1;
                self.amps[i | bit] = m.get(1, 0) * a0 + m.get(1, 1) * a1;
            }
        }
    }

    pub fn apply_cz(&mut self, p: usize, q: usize) {
        let mask = (1usize << self.bit(p)) | (1usize << self.bit(q));
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *a = -*a;
            }
        }
    }

    pub fn apply_z(&mut self, pos: usize) {
        let bit = 1usize << self.bit(pos);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & bit != 0 {
                *a = -*a;
            }
        }
    }

    /// Contract `⟨v|` into the qubit at `pos` and drop it from the register.
    pub fn project(&self, pos: usize, v: [C64; 2]) -> Self {
        let bit = self.bit(pos);
        let low = (1usize << bit) - 1;
        let mut amps = vec![C64::zero(); self.amps.len() / 2];
        for (j, out) in amps.iter_mut().enumerate() {
            let i0 = ((j & !low) << 1) | (j & low);
            let i1 = i0 | (1 << bit);
            *out = v[0].conj() * self.amps[i0] + v[1].conj() * self.amps[i1];
        }
        let mut labels = self.labels.clone();
        labels.remove(pos);
        StateVector { labels, amps }
    }

    /// Reorder positions to follow `order`, which must be a permutation of
    /// the current labels.
    pub fn permuted(&self, order: &[usize]) -> Result<Self, SimError> {
        let n = self.num_qubits();
        let mut src = Vec::with_capacity(n);
        for &l in order {
            src.push(self.position(l).ok_or(SimError::LabelMismatch)?);
        }
        if order.len() != n {
            return Err(SimError::LabelMismatch);
        }
        let mut amps = vec![C64::zero(); self.amps.len()];
        for (j, out) in amps.iter_mut().enumerate() {
            let mut i = 0usize;
            for (new_pos, &old_pos) in src.iter().enumerate() {
                if j >> (n - 1 - new_pos) & 1 == 1 {
                    i |= 1 << (n - 1 - old_pos);
                }
            }
            *out = self.amps[i];
        }
        Ok(StateVector { labels: order.to_vec(), amps })
    }
}

/// `∏ CZ_e |+⟩^⊗n` over the listed edges.
pub fn graph_state(edges: &[(usize, usize)], n: usize) -> Result<StateVector, SimError> {
    if n > GRAPH_STATE_CAP {
        return Err(SimError::TooLarge { what: "graph state", size: n, cap: GRAPH_STATE_CAP });
    }
    let labels: Vec<usize> = (0..n).collect();
    let mut s = StateVector::plus(&labels)?;
    for &(a, b) in edges {
        if a >= n || b >= n || a == b {
            return Err(SimError::LabelMismatch);
        }
        s.apply_cz(a, b);
    }
    Ok(s)
}

/// Project qubit `pos` onto the equatorial outcome `m` of basis `B(α)`.
///
/// The returned branch keeps its weight: its norm is the square root of the
/// outcome probability when `s` is normalized.
pub fn measure_equatorial(s: &StateVector, pos: usize, alpha: f64, m: u8) -> Result<StateVector, SimError> {
    let out = s.project(pos, equatorial(alpha, m));
    if out.norm() <= ZERO_BRANCH_TOL * s.norm().max(1.0) {
        return Err(SimError::ZeroBranch);
    }
    Ok(out)
}

/// Qubit-level Type-1 fusion: apply `|0⟩⟨00| + |1⟩⟨11|` to the pair and keep
/// the qubit at `qa`.
pub fn fuse_type1(s: &StateVector, qa: usize, qb: usize) -> Result<StateVector, SimError> {
    if qa == qb || qa >= s.num_qubits() || qb >= s.num_qubits() {
        return Err(SimError::LabelMismatch);
    }
    let (ba, bb) = (s.bit(qa), s.bit(qb));
    let low = (1usize << bb) - 1;
    let mut amps = vec![C64::zero(); s.amps.len() / 2];
    for (j, out) in amps.iter_mut().enumerate() {
        let i = ((j & !low) << 1) | (j & low);
        // position of qa in the reduced index shifts down when it sat above qb
        let a_bit_reduced = if ba > bb { ba - 1 } else { ba };
        if j >> a_bit_reduced & 1 == 1 {
            *out = s.amps[i | (1 << bb)];
        } else {
            *out = s.amps[i];
        }
    }
    let mut labels = s.labels.clone();
    labels.remove(qb);
    let out = StateVector { labels, amps };
    if out.norm() <= ZERO_BRANCH_TOL {
        return Err(SimError::ZeroBranch);
    }
    Ok(out)
}

/// `|⟨a|b⟩|² / (‖a‖²‖b‖²)` after aligning `b` to the label order of `a`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64, SimError> {
    let b = b.permuted(a.labels())?;
    let inner: C64 = a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum();
    let denom = a.norm().powi(2) * b.norm().powi(2);
    if denom <= ZERO_BRANCH_TOL {
        return Err(SimError::ZeroBranch);
    }
    Ok(inner.norm_sqr() / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::gates;

    fn close(a: C64, re: f64, im: f64) -> bool {
        (a - C64::new(re, im)).norm() < 1e-12
    }

    #[test]
    fn one_vertex_graph_is_plus() {
        let s = graph_state(&[], 1).unwrap();
        assert!(close(s.amps[0], FRAC_1_SQRT_2, 0.0) && close(s.amps[1], FRAC_1_SQRT_2, 0.0));
    }

    #[test]
    fn one_edge_graph_expansion() {
        let s = graph_state(&[(0, 1)], 2).unwrap();
        let expected = [0.5, 0.5, 0.5, -0.5];
        for (a, e) in s.amps.iter().zip(expected) {
            assert!(close(*a, e, 0.0));
        }
    }

    #[test]
    fn plus_measured_in_its_own_basis_is_certain() {
        let s = graph_state(&[], 1).unwrap();
        let b = measure_equatorial(&s, 0, 0.0, 0).unwrap();
        assert_eq!(b.num_qubits(), 0);
        assert!(close(b.amps[0], 1.0, 0.0));
        assert_eq!(measure_equatorial(&s, 0, 0.0, 1), Err(SimError::ZeroBranch));
    }

    #[test]
    fn measuring_a_pair_teleports_h_rz() {
        let alpha = 0.83;
        let s = graph_state(&[(0, 1)], 2).unwrap();
        let out = measure_equatorial(&s, 0, alpha, 0).unwrap();
        let mut expected = StateVector::plus(&[1]).unwrap();
        expected.apply_1q(0, &gates::h_rz(-alpha));
        assert!((fidelity(&out, &expected).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fusing_bell_pairs_gives_ghz() {
        let bell = StateVector::from_amplitudes(
            vec![0, 1],
            vec![C64::new(FRAC_1_SQRT_2, 0.0), C64::zero(), C64::zero(), C64::new(FRAC_1_SQRT_2, 0.0)],
        );
        let other = StateVector { labels: vec![2, 3], ..bell.clone() };
        let fused = fuse_type1(&bell.tensor(&other).unwrap(), 1, 2).unwrap();
        assert_eq!(fused.labels(), &[0, 1, 3]);
        let nz: Vec<usize> = (0..8).filter(|&i| fused.amps[i].norm() > 1e-12).collect();
        assert_eq!(nz, vec![0, 7]);
    }

    #[test]
    fn fusing_two_edges_gives_a_path() {
        // edges 0-1 and 2-3, fuse 1 with 2: path 0-1-3
        let s = graph_state(&[(0, 1), (2, 3)], 4).unwrap();
        let fused = fuse_type1(&s, 1, 2).unwrap();
        let mut path = graph_state(&[(0, 1), (1, 2)], 3).unwrap();
        path.labels = vec![0, 1, 3];
        assert!((fidelity(&fused, &path).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn permutation_round_trip() {
        let s = graph_state(&[(0, 1), (1, 2)], 3).unwrap();
        let mut t = s.clone();
        t.apply_1q(2, &gates::hadamard());
        let p = t.permuted(&[2, 0, 1]).unwrap().permuted(&[0, 1, 2]).unwrap();
        assert_eq!(p, t);
    }
}
