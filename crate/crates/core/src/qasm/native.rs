use std::fmt;

use super::circuit::{Circuit, GateKind};
use super::FrontendError;
use crate::phase::Phase;

/// One operation of the native one-way gate set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NativeOp {
    /// `H·Rz(θ)` on one qubit, with `Rz(θ) = diag(1, e^{iθ})`.
    HRz { qubit: usize, theta: Phase },
    Cz { a: usize, b: usize },
}

impl fmt::Display for NativeOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NativeOp::HRz { qubit, theta } => write!(f, "HRZ({qubit}, {theta})"),
            NativeOp::Cz { a, b } => write!(f, "CZ({a}, {b})"),
        }
    }
}

/// A program over `{H·Rz(θ), CZ}`, listed in time order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NativeSeq {
    pub num_qubits: usize,
    pub ops: Vec<NativeOp>,
}

impl NativeSeq {
    pub fn new(num_qubits: usize) -> Self {
        NativeSeq { num_qubits, ops: Vec::new() }
    }

    pub fn hrz(mut self, qubit: usize, theta: Phase) -> Self {
        self.ops.push(NativeOp::HRz { qubit, theta });
        self
    }

    pub fn cz(mut self, a: usize, b: usize) -> Self {
        self.ops.push(NativeOp::Cz { a, b });
        self
    }

    pub fn hrz_count(&self) -> usize {
        self.ops.iter().filter(|op| matches!(op, NativeOp::HRz { .. })).count()
    }

    pub fn cz_count(&self) -> usize {
        self.ops.len() - self.hrz_count()
    }
}

impl fmt::Display for NativeSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ops: Vec<String> = self.ops.iter().map(|o| o.to_string()).collect();
        write!(f, "[{}]", ops.join(", "))
    }
}

/// Rewrite a basis circuit into native operations.
///
/// Each gate expands through one fixed identity, written here in time order:
///
/// | gate      | native ops                              |
/// |-----------|-----------------------------------------|
/// | `Rz(θ)`   | `HRZ(q,θ)`, `HRZ(q,0)`                  |
/// | `H`       | `HRZ(q,0)`                              |
/// | `Rx(θ)`   | `HRZ(q,0)`, `HRZ(q,θ)`                  |
/// | `CX(a,b)` | `HRZ(b,0)`, `CZ(a,b)`, `HRZ(b,0)`       |
/// | `CZ(a,b)` | `CZ(a,b)`                               |
pub fn rewrite_to_native(c: &Circuit) -> Result<NativeSeq, FrontendError> {
    let zero = Phase::zero();
    let mut s = NativeSeq::new(c.num_qubits);
    for g in &c.gates {
        let q = &g.qubits;
        s = match g.kind {
            GateKind::Rz => s.hrz(q[0], g.params[0].to_phase()).hrz(q[0], zero),
            GateKind::H => s.hrz(q[0], zero),
            GateKind::Rx => s.hrz(q[0], zero).hrz(q[0], g.params[0].to_phase()),
            GateKind::CX => s.hrz(q[1], zero).cz(q[0], q[1]).hrz(q[1], zero),
            GateKind::CZ => s.cz(q[0], q[1]),
            other => return Err(FrontendError::NotBasis { gate: other.name().to_string() }),
        };
    }
    Ok(s)
}

/// Prefix every qubit with `HRZ(q, 0)`.
///
/// A pattern whose input vertices are prepared in `|+⟩` then behaves as the
/// circuit started from `|0⟩`, because `H|+⟩ = |0⟩`.
pub fn with_zero_state_prefix(s: &NativeSeq) -> NativeSeq {
    let mut ops: Vec<NativeOp> =
        (0..s.num_qubits).map(|qubit| NativeOp::HRz { qubit, theta: Phase::zero() }).collect();
    ops.extend_from_slice(&s.ops);
    NativeSeq { num_qubits: s.num_qubits, ops }
}
