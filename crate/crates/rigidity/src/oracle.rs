//! Brute-force reference checks. These are deliberately naive and stay
//! independent of the pebble game and the constructive pipeline; tests and
//! the acceptance suite compare the fast paths against them.

use std::collections::BTreeSet;

use crate::graph::{Graph, VertexId};
use crate::sparsity::{Sparsity, SparsityParams};

/// Checks the sparsity counts by enumerating every vertex subset with at
/// least k vertices. Exponential; intended for graphs on at most ~16
/// vertices.
pub fn check_sparsity_brute_force(g: &Graph, params: SparsityParams) -> Sparsity {
    let n = g.num_vertices();
    assert!(n <= 20, "brute-force sparsity check is exponential");
    for mask in 0u32..(1 << n) {
        let verts: BTreeSet<VertexId> = (0..n)
            .filter(|&v| mask >> v & 1 == 1)
            .map(VertexId)
            .collect();
        if verts.len() < params.k {
            continue;
        }
        let count = g.induced_edge_count(&verts);
        let cap = params.tight_count(verts.len());
        if cap.map_or(count > 0, |cap| count > cap) {
            let witness = g
                .edges()
                .iter()
                .filter(|e| verts.contains(&e.u) && verts.contains(&e.v))
                .copied()
                .collect();
            return Sparsity::NotSparse(witness);
        }
    }
    if params.tight_count(n) == Some(g.num_edges()) {
        Sparsity::Tight
    } else {
        Sparsity::Sparse
    }
}
