//! Randomized invariant checks.

use proptest::prelude::*;

use rigidity::graph::{parse_graph, serialize_graph, Edge, Graph};
use rigidity::oracle::check_sparsity_brute_force;
use rigidity::sparsity::{check_sparsity, SparsityParams};

fn arb_graph() -> impl Strategy<Value = Graph> {
    (2usize..=7).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .collect();
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |mask| {
            let edges: Vec<Edge> = pairs
                .iter()
                .zip(&mask)
                .filter(|(_, keep)| **keep)
                .map(|(&(u, v), _)| Edge::new(u, v))
                .collect();
            Graph::new(n, edges)
        })
    })
}

proptest! {
    #[test]
    fn serialize_parse_round_trip(g in arb_graph()) {
        let text = serialize_graph(&g);
        let back = parse_graph(&text).expect("serialized graph parses");
        prop_assert_eq!(back.num_vertices(), g.num_vertices());
        prop_assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn pebble_game_matches_brute_force(g in arb_graph()) {
        for params in [SparsityParams::laman(), SparsityParams::maxwell_3d()] {
            let fast = check_sparsity(&g, params);
            let slow = check_sparsity_brute_force(&g, params);
            prop_assert_eq!(
                std::mem::discriminant(&fast),
                std::mem::discriminant(&slow),
                "params {:?}: {:?} vs {:?}", params, fast, slow
            );
        }
    }
}
