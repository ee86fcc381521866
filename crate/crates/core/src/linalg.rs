//! Dense complex matrices used by every verification route.
//!
//! Basis ordering is big-endian throughout the crate: in an `n`-qubit index,
//! qubit 0 is the most significant bit. This is the ordering in which the
//! textbook CNOT and CZ matrices are written.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num::complex::Complex64;
use num::{One, Zero};

pub type C64 = Complex64;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `e^{iθ}`.
pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// A dense `rows × cols` complex matrix with an explicit scalar factor.
///
/// The represented map is `scalar · data`. Most producers leave the scalar at
/// one; diagram evaluation puts the diagram's tracked scalar here.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
    pub scalar: C64,
}

impl LinearMap {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        LinearMap { rows, cols, data: vec![C64::zero(); rows * cols], scalar: C64::one() }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = C64::one();
        }
        m
    }

    /// Row-major construction. Panics if the length does not match.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        LinearMap { rows, cols, data, scalar: C64::one() }
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        Self::from_rows(rows, cols, data.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry including the scalar factor.
    pub fn get(&self, r: usize, col: usize) -> C64 {
        self.scalar * self.data[r * self.cols + col]
    }

    pub fn raw(&self, r: usize, col: usize) -> C64 {
        self.data[r * self.cols + col]
    }

    pub fn raw_mut(&mut self, r: usize, col: usize) -> &mut C64 {
        &mut self.data[r * self.cols + col]
    }

    /// Fold the scalar into the entries.
    pub fn to_dense(&self) -> LinearMap {
        LinearMap {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * self.scalar).collect(),
            scalar: C64::one(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = C64> + '_ {
        self.data.iter().map(move |&x| x * self.scalar)
    }

    pub fn matmul(&self, rhs: &LinearMap) -> LinearMap {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matmul");
        let mut out = LinearMap::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == C64::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        out.scalar = self.scalar * rhs.scalar;
        out
    }

    pub fn kron(&self, rhs: &LinearMap) -> LinearMap {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = LinearMap::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.data[i * self.cols + j];
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.data[(i * rhs.rows + k) * cols + j * rhs.cols + l] =
                            a * rhs.data[k * rhs.cols + l];
                    }
                }
            }
        }
        out.scalar = self.scalar * rhs.scalar;
        out
    }

    pub fn adjoint(&self) -> LinearMap {
        let mut out = LinearMap::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out.scalar = self.scalar.conj();
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry-wise difference, scalars included.
    pub fn max_abs_diff(&self, other: &LinearMap) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.entries().zip(other.entries()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Max-norm distance after factoring out the best complex scalar.
    ///
    /// Both maps are scaled to unit Frobenius norm and phase-aligned by their
    /// inner product. Returns `f64::INFINITY` on shape mismatch or when either
    /// map is zero.
    pub fn distance_up_to_scalar(&self, other: &LinearMap) -> f64 {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return f64::INFINITY;
        }
        let na = self.frobenius_norm();
        let nb = other.frobenius_norm();
        if na < 1e-300 || nb < 1e-300 {
            return f64::INFINITY;
        }
        let inner: C64 = self.entries().zip(other.entries()).map(|(a, b)| b.conj() * a).sum();
        let phase = if inner.norm() < 1e-300 { C64::one() } else { inner / inner.norm() };
        self.entries()
            .zip(other.entries())
            .map(|(a, b)| (a / na - phase * b / nb).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.entries().all(|x| x.norm() <= tol)
    }
}

impl fmt::Display for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| {
                    let z = self.get(i, j);
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Elementary matrices. Multi-qubit matrices list operand 0 as the most
/// significant bit.
pub mod gates {
    use super::*;

    pub fn hadamard() -> LinearMap {
        let h = FRAC_1_SQRT_2;
        LinearMap::from_real(2, 2, &[h, h, h, -h])
    }

    pub fn pauli_x() -> LinearMap {
        LinearMap::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
    }

    pub fn pauli_y() -> LinearMap {
        LinearMap::from_rows(2, 2, vec![C64::zero(), c(0.0, -1.0), c(0.0, 1.0), C64::zero()])
    }

    pub fn pauli_z() -> LinearMap {
        LinearMap::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0])
    }

    /// `diag(1, e^{iθ})`, the Z-phase spider as a gate.
    pub fn phase(theta: f64) -> LinearMap {
        LinearMap::diag(&[C64::one(), cis(theta)])
    }

    /// `diag(e^{-iθ/2}, e^{iθ/2})`.
    pub fn rz(theta: f64) -> LinearMap {
        LinearMap::diag(&[cis(-theta / 2.0), cis(theta / 2.0)])
    }

    pub fn rx(theta: f64) -> LinearMap {
        let (s, co) = (theta / 2.0).sin_cos();
        LinearMap::from_rows(2, 2, vec![c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0)])
    }

    pub fn ry(theta: f64) -> LinearMap {
        let (s, co) = (theta / 2.0).sin_cos();
        LinearMap::from_real(2, 2, &[co, -s, s, co])
    }

    /// OpenQASM `U(θ, φ, λ)`.
    pub fn u3(theta: f64, phi: f64, lambda: f64) -> LinearMap {
        let (s, co) = (theta / 2.0).sin_cos();
        LinearMap::from_rows(
            2,
            2,
            vec![
                c(co, 0.0),
                -cis(lambda) * s,
                cis(phi) * s,
                cis(phi + lambda) * co,
            ],
        )
    }

    /// `H·Rz(θ)` with the Z-phase convention `diag(1, e^{iθ})`.
    pub fn h_rz(theta: f64) -> LinearMap {
        hadamard().matmul(&phase(theta))
    }

    /// `|0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ U` for a single-qubit `U`.
    pub fn controlled(u: &LinearMap) -> LinearMap {
        let d = u.rows();
        let mut m = LinearMap::identity(2 * d);
        for i in 0..d {
            for j in 0..d {
                *m.raw_mut(d + i, d + j) = u.get(i, j);
            }
        }
        m
    }

    pub fn cnot() -> LinearMap {
        controlled(&pauli_x())
    }

    pub fn cz() -> LinearMap {
        LinearMap::diag(&[C64::one(), C64::one(), C64::one(), c(-1.0, 0.0)])
    }

    pub fn swap() -> LinearMap {
        let mut m = LinearMap::zeros(4, 4);
        for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            *m.raw_mut(i, j) = C64::one();
        }
        m
    }

    /// Permutation matrix of the Toffoli gate.
    pub fn toffoli() -> LinearMap {
        let mut m = LinearMap::zeros(8, 8);
        for i in 0..8usize {
            let j = if i >= 6 { i ^ 1 } else { i };
            *m.raw_mut(j, i) = C64::one();
        }
        m
    }

    /// Permutation matrix of the controlled swap.
    pub fn fredkin() -> LinearMap {
        let mut m = LinearMap::zeros(8, 8);
        for i in 0..8usize {
            let j = match i {
                5 => 6,
                6 => 5,
                x => x,
            };
            *m.raw_mut(j, i) = C64::one();
        }
        m
    }
}

/// Apply a `k`-qubit matrix to the listed qubits of every column of `state`.
///
/// `state` is a `2^n × m` matrix stored row-major, i.e. `m` state vectors
/// side by side. Qubit `q` corresponds to bit `n-1-q` of the row index.
pub fn apply_to_columns(state: &mut LinearMap, n: usize, qubits: &[usize], gate: &LinearMap) {
    let k = qubits.len();
    let dim = 1usize << k;
    assert_eq!(gate.rows(), dim, "gate size does not match operand count");
    let cols = state.cols();
    let shifts: Vec<usize> = qubits.iter().map(|&q| n - 1 - q).collect();
    let mask: usize = shifts.iter().map(|s| 1usize << s).sum();
    let mut idx = vec![0usize; dim];
    let mut buf = vec![C64::zero(); dim];
    for base in 0..(1usize << n) {
        if base & mask != 0 {
            continue;
        }
        for (local, slot) in idx.iter_mut().enumerate() {
            let mut r = base;
            for (j, s) in shifts.iter().enumerate() {
                if local >> (k - 1 - j) & 1 == 1 {
                    r |= 1 << s;
                }
            }
            *slot = r;
        }
        for col in 0..cols {
            for (local, &r) in idx.iter().enumerate() {
                buf[local] = state.raw(r, col);
            }
            for (out, &r) in idx.iter().enumerate() {
                let mut acc = C64::zero();
                for (inp, &v) in buf.iter().enumerate() {
                    acc += gate.get(out, inp) * v;
                }
                *state.raw_mut(r, col) = acc;
            }
        }
    }
}
