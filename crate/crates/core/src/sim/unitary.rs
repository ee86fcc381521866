use std::f64::consts::PI;

use super::SimError;
use crate::linalg::{apply_to_columns, cis, gates, LinearMap};
use crate::qasm::{Circuit, Gate, GateKind, NativeOp, NativeSeq};

/// Largest register for which dense unitaries are built.
pub const UNITARY_QUBIT_CAP: usize = 7;

/// Reference matrix of a source gate, built directly from its definition.
pub fn gate_matrix(g: &Gate) -> LinearMap {
    use GateKind::*;
    let p: Vec<f64> = g.params.iter().map(|a| a.radians()).collect();
    match g.kind {
        Id => LinearMap::identity(2),
        X => gates::pauli_x(),
        Y => gates::pauli_y(),
        Z => gates::pauli_z(),
        H => gates::hadamard(),
        S => gates::phase(PI / 2.0),
        Sdg => gates::phase(-PI / 2.0),
        T => gates::phase(PI / 4.0),
        Tdg => gates::phase(-PI / 4.0),
        Sx => gates::rx(PI / 2.0),
        Sxdg => gates::rx(-PI / 2.0),
        Rx => gates::rx(p[0]),
        Ry => gates::ry(p[0]),
        Rz => gates::rz(p[0]),
        U1 => gates::phase(p[0]),
        U2 => gates::u3(PI / 2.0, p[0], p[1]),
        U3 => gates::u3(p[0], p[1], p[2]),
        CX => gates::cnot(),
        CY => gates::controlled(&gates::pauli_y()),
        CZ => gates::cz(),
        CH => gates::controlled(&gates::hadamard()),
        Swap => gates::swap(),
        CCX => gates::toffoli(),
        CSwap => gates::fredkin(),
        CRz => gates::controlled(&gates::rz(p[0])),
        CU1 => gates::controlled(&gates::phase(p[0])),
        CU3 => gates::controlled(&gates::u3(p[0], p[1], p[2])),
        Rzz => {
            let (a, b) = (cis(-p[0] / 2.0), cis(p[0] / 2.0));
            LinearMap::diag(&[a, b, b, a])
        }
    }
}

fn check_cap(n: usize) -> Result<(), SimError> {
    if n > UNITARY_QUBIT_CAP {
        return Err(SimError::TooLarge { what: "unitary", size: n, cap: UNITARY_QUBIT_CAP });
    }
    Ok(())
}

/// Dense unitary of a circuit, multiplying gate by gate.
pub fn unitary_of(c: &Circuit) -> Result<LinearMap, SimError> {
    check_cap(c.num_qubits)?;
    let mut u = LinearMap::identity(1 << c.num_qubits);
    for g in &c.gates {
        apply_to_columns(&mut u, c.num_qubits, &g.qubits, &gate_matrix(g));
    }
    Ok(u)
}

/// Dense unitary of a native sequence.
pub fn unitary_of_native(s: &NativeSeq) -> Result<LinearMap, SimError> {
    check_cap(s.num_qubits)?;
    let mut u = LinearMap::identity(1 << s.num_qubits);
    let cz = gates::cz();
    for op in &s.ops {
        match *op {
            NativeOp::HRz { qubit, theta } => {
                apply_to_columns(&mut u, s.num_qubits, &[qubit], &gates::h_rz(theta.radians()))
            }
            NativeOp::Cz { a, b } => apply_to_columns(&mut u, s.num_qubits, &[a, b], &cz),
        }
    }
    Ok(u)
}
