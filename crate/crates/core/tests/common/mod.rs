//! Random inputs and independent reference constructions shared by the
//! integration tests.
#![allow(dead_code)]

use std::f64::consts::FRAC_1_SQRT_2;
use std::path::PathBuf;

use num::complex::Complex64;
use oneway::mgraph::MGraph;
use oneway::phase::Angle;
use oneway::qasm::{Circuit, Gate, GateKind};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn benchmark_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("benchmarks")
}

pub fn benchmark(name: &str) -> String {
    std::fs::read_to_string(benchmark_dir().join(format!("{name}.qasm"))).expect("benchmark file")
}

fn random_angle<R: Rng>(rng: &mut R) -> Angle {
    if rng.gen_bool(0.5) {
        Angle::pi_frac(rng.gen_range(-7..=7), 4)
    } else {
        Angle::Radians(rng.gen_range(-3.2..3.2))
    }
}

/// Circuit of up to `max_gates` gates over a mixed gate set.
pub fn random_circuit<R: Rng>(rng: &mut R, max_qubits: usize, max_gates: usize) -> Circuit {
    use GateKind::*;
    let n = rng.gen_range(1..=max_qubits);
    let mut c = Circuit::new(n);
    let len = rng.gen_range(0..=max_gates);
    let one = [H, X, Z, S, Sdg, T, Tdg, Rz, Rx, Ry, Y];
    let two = [CX, CZ, Swap, CRz];
    for _ in 0..len {
        let g = if n >= 2 && rng.gen_bool(0.35) {
            let mut qs: Vec<usize> = (0..n).collect();
            qs.shuffle(rng);
            let kind = *two.choose(rng).unwrap();
            let params: Vec<Angle> = (0..kind.num_params()).map(|_| random_angle(rng)).collect();
            Gate::new(kind, &qs[..2], &params)
        } else {
            let kind = *one.choose(rng).unwrap();
            let params: Vec<Angle> = (0..kind.num_params()).map(|_| random_angle(rng)).collect();
            Gate::new(kind, &[rng.gen_range(0..n)], &params)
        };
        c.push(g).unwrap();
    }
    c
}

/// Circuit over the Clifford gates H, S, S†, X, Z, CX and CZ.
pub fn random_clifford_circuit<R: Rng>(rng: &mut R, max_qubits: usize, max_gates: usize) -> Circuit {
    use GateKind::*;
    let n = rng.gen_range(1..=max_qubits);
    let mut c = Circuit::new(n);
    for _ in 0..rng.gen_range(0..=max_gates) {
        let g = if n >= 2 && rng.gen_bool(0.4) {
            let mut qs: Vec<usize> = (0..n).collect();
            qs.shuffle(rng);
            Gate::two(*[CX, CZ].choose(rng).unwrap(), qs[0], qs[1])
        } else {
            Gate::single(*[H, S, Sdg, X, Z].choose(rng).unwrap(), rng.gen_range(0..n))
        };
        c.push(g).unwrap();
    }
    c
}

/// Random graph on `n` vertices, each edge present with probability `p`.
pub fn random_edges<R: Rng>(rng: &mut R, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                e.push((a, b));
            }
        }
    }
    e
}

/// Random connected graph: a random spanning tree plus extra edges.
pub fn random_connected_edges<R: Rng>(rng: &mut R, n: usize) -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    for v in 1..n {
        e.push((rng.gen_range(0..v), v));
    }
    let p = rng.gen_range(0.0..0.6);
    for (a, b) in random_edges(rng, n, p) {
        if !e.contains(&(a, b)) {
            e.push((a, b));
        }
    }
    e
}

pub fn mgraph_of(n: usize, edges: &[(usize, usize)]) -> MGraph {
    let mut m = MGraph::new();
    for v in 0..n {
        m.add_vertex(v, None, None);
    }
    for &(a, b) in edges {
        m.add_edge(a, b);
    }
    m
}

/// `∏ CZ |+⟩^n` written out amplitude by amplitude, vertex 0 most significant.
pub fn reference_graph_state(n: usize, edges: &[(usize, usize)]) -> Vec<Complex64> {
    let norm = 0.5f64.powf(n as f64 / 2.0);
    (0..1usize << n)
        .map(|i| {
            let bit = |v: usize| i >> (n - 1 - v) & 1;
            let parity: usize = edges.iter().map(|&(a, b)| bit(a) & bit(b)).sum();
            Complex64::new(if parity.is_multiple_of(2) { norm } else { -norm }, 0.0)
        })
        .collect()
}

/// Apply a Hadamard to qubit `q` of an `n`-qubit amplitude vector.
pub fn hadamard_on(amps: &mut [Complex64], n: usize, q: usize) {
    let bit = 1usize << (n - 1 - q);
    for i in 0..amps.len() {
        if i & bit == 0 {
            let (a, b) = (amps[i], amps[i | bit]);
            amps[i] = (a + b) * FRAC_1_SQRT_2;
            amps[i | bit] = (a - b) * FRAC_1_SQRT_2;
        }
    }
}

pub fn state_fidelity(a: &[Complex64], b: &[Complex64]) -> f64 {
    let inner: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    let na: f64 = a.iter().map(|x| x.norm_sqr()).sum();
    let nb: f64 = b.iter().map(|x| x.norm_sqr()).sum();
    inner.norm_sqr() / (na * nb)
}

/// Dense 2×2 product helper for single-qubit references.
pub fn mat2_mul(a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}
