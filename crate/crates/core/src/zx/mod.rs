//! ZX diagrams: representation, construction from native sequences,
//! graph-like normalization and dense evaluation.

mod convert;
mod diagram;
mod dot;
mod eval;

pub use convert::{check_graph_like, is_graph_like, native_to_diagram, to_graph_like};
pub(crate) use convert::merge_into;
pub use diagram::{Diagram, EdgeCount, EdgeType, Node, NodeId, NodeKind};
pub use dot::to_dot;
pub use eval::{evaluate, evaluate_with, EvalError, EvalLimits};
