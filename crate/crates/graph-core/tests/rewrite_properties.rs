use graph_core::{local_complement, sample_erdos_renyi, Graph};
use proptest::prelude::*;

fn arbitrary_graph() -> impl Strategy<Value = Graph> {
    (2usize..12, any::<u64>())
        .prop_map(|(n, seed)| sample_erdos_renyi(n, 0.5, seed).unwrap())
}

proptest! {
    #[test]
    fn local_complement_is_an_involution(g in arbitrary_graph(), v_sel in any::<u64>()) {
        let v = (v_sel % g.n() as u64) as usize;
        let twice = local_complement(&local_complement(&g, v), v);
        prop_assert_eq!(twice, g);
    }

    #[test]
    fn local_complement_fixes_non_neighbor_degrees(g in arbitrary_graph(), v_sel in any::<u64>()) {
        let v = (v_sel % g.n() as u64) as usize;
        let lc = local_complement(&g, v);
        for u in 0..g.n() {
            if u != v && !g.has_edge(u, v) {
                prop_assert_eq!(lc.degree(u) % 2, g.degree(u) % 2);
                prop_assert_eq!(lc.degree(u), g.degree(u));
            }
        }
    }
}
