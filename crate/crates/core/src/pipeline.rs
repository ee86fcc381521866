//! The end-to-end compiler: QASM text to measurement graph, primitive plan
//! and photonic instructions, plus the oracle check of the result.

use thiserror::Error;

use crate::decompose::{check_plan, decompose, DecompositionPlan};
use crate::emit::{emit, EmitError, InstructionProgram};
use crate::linalg::{gates, LinearMap};
use crate::mgraph::{as_graph_like, build_mgraph, extract_pattern, MGraph, MGraphError};
use crate::qasm::{
    parse_qasm, rewrite_to_native, transpile_to_basis, with_zero_state_prefix, Circuit, FrontendError, NativeSeq,
};
use crate::sim::{run_pattern, unitary_of, SimError};
use crate::simplify::{simplify_observed, Observer, RuleFiring, SimplifyError, SimplifyOptions};
use crate::zx::{to_graph_like, Diagram};

/// Largest deviation, after factoring out a scalar, that verification accepts.
pub const VERIFY_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompileOptions {
    /// 0 skips rewriting, 1 runs the full simplifier.
    pub opt_level: u8,
    pub max_firings: usize,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions { opt_level: 1, max_firings: SimplifyOptions::default().max_firings }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("frontend: {0}")]
    Frontend(#[from] FrontendError),
    #[error("simplify: {0}")]
    Simplify(#[from] SimplifyError),
    #[error("extract: {0}")]
    Extract(#[from] MGraphError),
    #[error("decompose: plan does not rebuild the graph ({0})")]
    Plan(String),
    #[error("emit: {0}")]
    Emit(#[from] EmitError),
}

impl PipelineError {
    /// True when the input itself is at fault rather than the compiler.
    pub fn is_input_error(&self) -> bool {
        matches!(self, PipelineError::Frontend(_))
    }
}

/// Every intermediate artifact of one compilation.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub circuit: Circuit,
    pub basis: Circuit,
    /// Native sequence including the `|0⟩` preparation prefix.
    pub native: NativeSeq,
    pub initial: MGraph,
    pub diagram: Diagram,
    pub trace: Vec<RuleFiring>,
    pub mgraph: MGraph,
    pub plan: DecompositionPlan,
    pub program: InstructionProgram,
}

pub fn compile_qasm(text: &str, opts: CompileOptions) -> Result<Compiled, PipelineError> {
    compile_circuit(&parse_qasm(text)?, opts)
}

pub fn compile_circuit(circuit: &Circuit, opts: CompileOptions) -> Result<Compiled, PipelineError> {
    compile_observed(circuit, opts, None)
}

/// Compile, passing every rewrite to `observer(firing, before, after)`.
pub fn compile_observed(
    circuit: &Circuit,
    opts: CompileOptions,
    observer: Option<Observer<'_>>,
) -> Result<Compiled, PipelineError> {
    let basis = transpile_to_basis(circuit)?;
    let native = with_zero_state_prefix(&rewrite_to_native(&basis)?);
    let initial = build_mgraph(&native);
    let (mgraph, diagram, trace) = if opts.opt_level == 0 {
        (initial.clone(), as_graph_like(&initial), Vec::new())
    } else {
        let d = to_graph_like(&as_graph_like(&initial));
        let out = simplify_observed(&d, SimplifyOptions { max_firings: opts.max_firings }, observer)?;
        (extract_pattern(&out.diagram)?, out.diagram, out.trace)
    };
    let plan = decompose(&mgraph);
    check_plan(&plan, &mgraph).map_err(|e| PipelineError::Plan(format!("{e:?}")))?;
    let program = emit(&plan, &mgraph)?;
    Ok(Compiled { circuit: circuit.clone(), basis, native, initial, diagram, trace, mgraph, plan, program })
}

/// The map a compiled pattern should realize: the circuit unitary after the
/// Hadamard layer that turns `|+⟩` inputs into `|0⟩`.
pub fn reference_map(c: &Circuit) -> Result<LinearMap, SimError> {
    let u = unitary_of(c)?;
    let mut h = LinearMap::identity(1);
    for _ in 0..c.num_qubits {
        h = h.kron(&gates::hadamard());
    }
    Ok(u.matmul(&h))
}

/// Max-norm deviation between the postselected pattern map of `m` and the
/// reference map of `c`, after factoring out the best scalar.
pub fn pattern_deviation(m: &MGraph, c: &Circuit) -> Result<f64, SimError> {
    let expected = reference_map(c)?;
    let got = run_pattern(m)?;
    Ok(got.distance_up_to_scalar(&expected))
}

#[cfg(test)]
mod tests {
    use super::*;

    const BELL: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\nh q[0];\ncx q[0],q[1];\n";

    #[test]
    fn bell_pair_compiles_and_verifies() {
        for opt_level in [0, 1] {
            let c = compile_qasm(BELL, CompileOptions { opt_level, ..Default::default() }).unwrap();
            assert!(pattern_deviation(&c.mgraph, &c.circuit).unwrap() < VERIFY_TOL);
        }
    }

    #[test]
    fn empty_circuit_only_prepares_its_qubits() {
        let c = compile_qasm("OPENQASM 2.0;\nqreg q[2];\n", CompileOptions::default()).unwrap();
        assert_eq!(c.program.measurements.len(), 2);
        assert!(c.program.measurements.iter().all(|m| m.alpha_rad == 0.0));
        assert!(c.program.fusions.is_empty());
        assert!(pattern_deviation(&c.mgraph, &c.circuit).unwrap() < VERIFY_TOL);
    }

    #[test]
    fn syntax_errors_are_input_errors() {
        let e = compile_qasm("OPENQASM 2.0;\nqreg q[1];\nh q[0]\n", CompileOptions::default()).unwrap_err();
        assert!(e.is_input_error());
        assert!(e.to_string().starts_with("frontend"));
    }

    #[test]
    fn flipping_an_angle_is_detected() {
        let src = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\nt q[0];\nh q[0];\n";
        let c = compile_qasm(src, CompileOptions { opt_level: 0, ..Default::default() }).unwrap();
        let mut m = c.mgraph.clone();
        let v = m.measured().find(|v| !v.angle.unwrap().is_zero()).unwrap().id;
        let a = m.vertex(v).unwrap().angle.unwrap();
        m.vertex_mut(v).unwrap().angle = Some(-a);
        assert!(pattern_deviation(&m, &c.circuit).unwrap() > VERIFY_TOL);
    }
}
