//! Dense numerical oracle: circuit unitaries, graph states, equatorial
//! measurements, Type-1 fusion and execution of measurement patterns.

mod pattern;
mod state;
mod unitary;

pub use state::{
    equatorial, fidelity, fuse_type1, graph_state, measure_equatorial, StateVector, GRAPH_STATE_CAP,
    STATE_QUBIT_CAP, ZERO_BRANCH_TOL,
};
pub use pattern::{chain_path, run_pattern, run_pattern_with, sample_with_feedforward, FeedforwardRun, PatternLimits};
pub use unitary::{gate_matrix, unitary_of, unitary_of_native, UNITARY_QUBIT_CAP};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("{what} of size {size} exceeds the simulation cap of {cap}")]
    TooLarge { what: &'static str, size: usize, cap: usize },
    #[error("projection onto a probability-zero branch")]
    ZeroBranch,
    #[error("qubit labels do not match")]
    LabelMismatch,
    #[error("feed-forward sampling supports single-row chain patterns only")]
    NotAChain,
}
