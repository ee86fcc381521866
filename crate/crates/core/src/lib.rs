//! Compile gate-model circuits into measurement patterns for photonic
//! one-way quantum computers.

pub mod cli;
pub mod decompose;
pub mod emit;
pub mod linalg;
pub mod mgraph;
pub mod phase;
pub mod pipeline;
pub mod qasm;
pub mod sim;
pub mod simplify;
pub mod zx;
