//! Combinatorial rigidity toolkit: edge tripartitions of minimally 3-rigid
//! graphs, exact-rational rigidity matrices, the (k,l) pebble game, the
//! double-banana counter-example pipeline, and exhaustive desk-scale
//! searches for partition witnesses.

pub mod conjecture;
pub mod graph;
pub mod linalg;
pub mod oracle;
pub mod partition;
pub mod rigidity;
pub mod sparsity;
