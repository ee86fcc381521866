//! Circuit frontend: OpenQASM parsing, basis transpilation and the rewrite
//! to native one-way operations.

mod circuit;
mod native;
mod parse;
mod transpile;

pub use circuit::{Circuit, Gate, GateKind};
pub use native::{rewrite_to_native, with_zero_state_prefix, NativeOp, NativeSeq};
pub use parse::parse_qasm;
pub use transpile::transpile_to_basis;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrontendError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unsupported construct `{construct}` at {line}:{col}")]
    Unsupported { construct: String, line: usize, col: usize },
    #[error("no basis decomposition for gate `{gate}`")]
    NoDecomposition { gate: String },
    #[error("gate `{gate}` addresses qubit {qubit} but the circuit has {num_qubits}")]
    QubitOutOfRange { gate: String, qubit: usize, num_qubits: usize },
    #[error("gate `{gate}` uses qubit {qubit} twice")]
    RepeatedOperand { gate: String, qubit: usize },
    #[error("gate `{gate}` is outside the rotation basis")]
    NotBasis { gate: String },
}
