use std::fmt;

use crate::phase::Angle;

use super::FrontendError;

/// Gate vocabulary accepted from source programs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    Id,
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    Sx,
    Sxdg,
    Rx,
    Ry,
    Rz,
    U1,
    U2,
    U3,
    CX,
    CY,
    CZ,
    CH,
    Swap,
    CCX,
    CSwap,
    CRz,
    CU1,
    CU3,
    Rzz,
}

impl GateKind {
    /// Look up a gate by its OpenQASM name, including common aliases.
    pub fn from_name(name: &str) -> Option<GateKind> {
        use GateKind::*;
        Some(match name {
            "id" | "i" => Id,
            "x" => X,
            "y" => Y,
            "z" => Z,
            "h" => H,
            "s" => S,
            "sdg" => Sdg,
            "t" => T,
            "tdg" => Tdg,
            "sx" => Sx,
            "sxdg" => Sxdg,
            "rx" => Rx,
            "ry" => Ry,
            "rz" => Rz,
            "u1" | "p" => U1,
            "u2" => U2,
            "u3" | "u" | "U" => U3,
            "cx" | "CX" | "cnot" => CX,
            "cy" => CY,
            "cz" => CZ,
            "ch" => CH,
            "swap" => Swap,
            "ccx" | "toffoli" => CCX,
            "cswap" | "fredkin" => CSwap,
            "crz" => CRz,
            "cu1" | "cp" => CU1,
            "cu3" => CU3,
            "rzz" => Rzz,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        use GateKind::*;
        match self {
            Id => "id",
            X => "x",
            Y => "y",
            Z => "z",
            H => "h",
            S => "s",
            Sdg => "sdg",
            T => "t",
            Tdg => "tdg",
            Sx => "sx",
            Sxdg => "sxdg",
            Rx => "rx",
            Ry => "ry",
            Rz => "rz",
            U1 => "u1",
            U2 => "u2",
            U3 => "u3",
            CX => "cx",
            CY => "cy",
            CZ => "cz",
            CH => "ch",
            Swap => "swap",
            CCX => "ccx",
            CSwap => "cswap",
            CRz => "crz",
            CU1 => "cu1",
            CU3 => "cu3",
            Rzz => "rzz",
        }
    }

    pub fn num_qubits(self) -> usize {
        use GateKind::*;
        match self {
            CX | CY | CZ | CH | Swap | CRz | CU1 | CU3 | Rzz => 2,
            CCX | CSwap => 3,
            _ => 1,
        }
    }

    pub fn num_params(self) -> usize {
        use GateKind::*;
        match self {
            Rx | Ry | Rz | U1 | CRz | CU1 | Rzz => 1,
            U2 => 2,
            U3 | CU3 => 3,
            _ => 0,
        }
    }

    /// Member of the intermediate basis `{Rx, Rz, H, CX, CZ}`.
    pub fn is_basis(self) -> bool {
        matches!(self, GateKind::Rx | GateKind::Rz | GateKind::H | GateKind::CX | GateKind::CZ)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub params: Vec<Angle>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: &[usize], params: &[Angle]) -> Self {
        Gate { kind, qubits: qubits.to_vec(), params: params.to_vec() }
    }

    pub fn single(kind: GateKind, q: usize) -> Self {
        Self::new(kind, &[q], &[])
    }

    pub fn rotation(kind: GateKind, q: usize, theta: Angle) -> Self {
        Self::new(kind, &[q], &[theta])
    }

    pub fn two(kind: GateKind, a: usize, b: usize) -> Self {
        Self::new(kind, &[a, b], &[])
    }

    pub fn is_multi_qubit(&self) -> bool {
        self.qubits.len() > 1
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", ps.join(","))?;
        }
        let qs: Vec<String> = self.qubits.iter().map(|q| format!("q[{q}]")).collect();
        write!(f, " {}", qs.join(","))
    }
}

/// A gate-model circuit over a flat qubit register.
///
/// `measured` lists the qubits that carry final measurement markers, in the
/// order they were first measured. Markers never become pattern vertices.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    pub num_qubits: usize,
    pub gates: Vec<Gate>,
    pub measured: Vec<usize>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit { num_qubits, gates: Vec::new(), measured: Vec::new() }
    }

    /// Append a gate after validating operands and parameter count.
    pub fn push(&mut self, gate: Gate) -> Result<(), FrontendError> {
        self.check(&gate)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn with(mut self, gate: Gate) -> Self {
        self.push(gate).expect("invalid gate");
        self
    }

    pub fn check(&self, gate: &Gate) -> Result<(), FrontendError> {
        let name = gate.kind.name().to_string();
        if gate.qubits.len() != gate.kind.num_qubits() || gate.params.len() != gate.kind.num_params() {
            return Err(FrontendError::NoDecomposition {
                gate: format!(
                    "{name} with {} operands and {} parameters",
                    gate.qubits.len(),
                    gate.params.len()
                ),
            });
        }
        for (i, &q) in gate.qubits.iter().enumerate() {
            if q >= self.num_qubits {
                return Err(FrontendError::QubitOutOfRange { gate: name, qubit: q, num_qubits: self.num_qubits });
            }
            if gate.qubits[..i].contains(&q) {
                return Err(FrontendError::RepeatedOperand { gate: name, qubit: q });
            }
        }
        Ok(())
    }

    pub fn mark_measured(&mut self, q: usize) {
        if !self.measured.contains(&q) {
            self.measured.push(q);
        }
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_multi_qubit()).count()
    }

    pub fn is_basis(&self) -> bool {
        self.gates.iter().all(|g| g.kind.is_basis())
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qreg q[{}];", self.num_qubits)?;
        for g in &self.gates {
            writeln!(f, "{g};")?;
        }
        Ok(())
    }
}
