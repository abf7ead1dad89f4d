use percolab_core::percolation::{
    assign_uniforms, cluster_of, clusters, count_edge_disjoint_paths, reachable_off, OpenEdges,
    SearchScratch,
};
use percolab_core::GraphWindow;
use proptest::prelude::*;

fn window(side: usize) -> GraphWindow {
    GraphWindow::hypercubic(2, side).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coupling_is_monotone(side in 3usize..12, sample in any::<u64>(), a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let w = window(side);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let labels = assign_uniforms(&w, 7, sample);
        let small = labels.threshold(lo).unwrap();
        let large = labels.threshold(hi).unwrap();
        prop_assert!(small.is_subset_of(&large));

        let (fine, coarse) = (clusters(&w, &small), clusters(&w, &large));
        for (x, y) in w.edges().iter().copied() {
            if fine.same_cluster(x, y) {
                prop_assert!(coarse.same_cluster(x, y));
            }
        }
    }

    #[test]
    fn local_search_matches_union_find(side in 3usize..14, sample in any::<u64>(), p in 0.2f64..0.8) {
        let w = window(side);
        let config = assign_uniforms(&w, 11, sample).threshold(p).unwrap();
        let parts = clusters(&w, &config);
        let mut scratch = SearchScratch::new(&w);
        for v in 0..w.num_vertices() {
            scratch.reset();
            match cluster_of(&w, &config, v, &mut scratch) {
                None => prop_assert!(parts.is_pseudo_infinite(v)),
                Some(k) => {
                    prop_assert!(!parts.is_pseudo_infinite(v));
                    prop_assert_eq!(k.vertices.len(), parts.cluster_size(v));
                    prop_assert_eq!(k.touching_edges, parts.edge_count(v));
                }
            }
        }
    }

    #[test]
    fn disjoint_paths_bounded_by_cut(side in 5usize..12, sample in any::<u64>(), p in 0.3f64..0.9, r in 0usize..2) {
        let w = window(side);
        let config = assign_uniforms(&w, 13, sample).threshold(p).unwrap();
        let set = w.ball(w.origin(), r).unwrap();
        let paths = count_edge_disjoint_paths(&w, &config, &set, None).unwrap();
        prop_assert!(paths <= w.edge_boundary(&set).unwrap().len());

        let reach = reachable_off(&w, &config, &set);
        let escapes = w.edges().iter().enumerate().any(|(e, &(x, y))| {
            config.is_open(e) && (set.contains(x) && reach[y] || set.contains(y) && reach[x])
        });
        prop_assert_eq!(paths > 0, escapes);
    }
}
