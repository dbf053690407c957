use proptest::prelude::*;

use butterfly::exact::{choose_side, exact_count_with_work};
use butterfly::oracle::{brute_force_count, classify_pairs, enumerate_butterflies, exhaustive};
use butterfly::sampling::{median, run_estimator, EstimatorConfig, Method, WedgeIndex};
use butterfly::sparsify::{color_sparsify_estimate, edge_sparsify_estimate};
use butterfly::{
    count_per_edge, count_per_vertex, exact_count, exact_count_side, load_edge_list_str, BipartiteGraph, Side,
    VertexRef,
};

fn graph_from_mask(a: usize, b: usize, mask: &[bool]) -> Option<BipartiteGraph> {
    let edges: Vec<(u64, u64)> = (0..a * b)
        .filter(|&k| mask[k])
        .map(|k| ((k / b) as u64, (k % b) as u64))
        .collect();
    BipartiteGraph::from_edges(edges).ok()
}

fn small_graph(max_side: usize) -> impl Strategy<Value = BipartiteGraph> {
    (1..=max_side, 1..=max_side, 0.15f64..0.9)
        .prop_flat_map(|(a, b, p)| (Just(a), Just(b), prop::collection::vec(prop::bool::weighted(p), a * b)))
        .prop_filter_map("at least one edge", |(a, b, mask)| graph_from_mask(a, b, &mask))
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * b.abs().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_matches_brute_force_on_both_sides(g in small_graph(12)) {
        let b = brute_force_count(&g).unwrap();
        prop_assert_eq!(exact_count(&g).unwrap(), b);
        prop_assert_eq!(exact_count_side(&g, Side::Left).unwrap(), b);
        prop_assert_eq!(exact_count_side(&g, Side::Right).unwrap(), b);
        prop_assert_eq!(enumerate_butterflies(&g).unwrap().len() as u64, b);
    }

    #[test]
    fn swapping_sides_preserves_the_count(g in small_graph(12)) {
        let swapped = BipartiteGraph::from_edges(g.edges().map(|(l, r)| (r as u64, l as u64))).unwrap();
        prop_assert_eq!(exact_count(&swapped).unwrap(), exact_count(&g).unwrap());
    }

    #[test]
    fn local_counts_sum_to_four_times_global(g in small_graph(12)) {
        let b = exact_count(&g).unwrap();
        let by_vertex: u64 = (0..g.vertex_count())
            .map(|i| count_per_vertex(&g, g.vertex_at(i)).unwrap())
            .sum();
        let by_edge: u64 = g
            .edges()
            .map(|(l, r)| count_per_edge(&g, VertexRef::left(l), VertexRef::right(r)).unwrap())
            .sum();
        prop_assert_eq!(by_vertex, 4 * b);
        prop_assert_eq!(by_edge, 4 * b);
    }

    #[test]
    fn side_choice_follows_degree_square_sums(g in small_graph(12)) {
        let c = choose_side(&g);
        let s = g.stats();
        prop_assert_eq!(c.cost_left, s.sum_deg_sq_left as f64);
        prop_assert_eq!(c.cost_right, s.sum_deg_sq_right as f64);
        let expect = if c.cost_left < c.cost_right { Side::Right } else { Side::Left };
        prop_assert_eq!(c.chosen, expect);
        let (_, work) = exact_count_with_work(&g, c.chosen).unwrap();
        let mid: u64 = g
            .degrees(c.chosen.opposite())
            .map(|d| (d * d.saturating_sub(1) / 2) as u64)
            .sum();
        prop_assert_eq!(work.counter_updates, mid);
    }

    #[test]
    fn pair_types_partition_all_pairs(g in small_graph(9)) {
        let c = classify_pairs(&g).unwrap();
        let b = c.butterflies;
        prop_assert_eq!(c.total(), b * b.saturating_sub(1) / 2);
        prop_assert!(c.p_1w <= c.p_e() && c.p_e() <= c.p_v());
        // Per butterfly: 4 wedges each extend to at most Δ−2 others, 4 edges
        // to at most (Δ−2)² others, 2 vertex pairs to at most C(Δ−2, 2).
        let d = (g.max_degree() as u64).saturating_sub(2);
        prop_assert!(c.p_1w <= 2 * b * d);
        prop_assert!(c.p_1e <= 2 * b * d * d);
        prop_assert!(c.p_2v <= b * (d * d.saturating_sub(1) / 2));
    }

    #[test]
    fn sampling_is_unbiased_by_exhaustion(g in small_graph(7)) {
        let b = exact_count(&g).unwrap() as f64;
        prop_assert!(close(exhaustive::vsamp(&g).unwrap().mean, b));
        prop_assert!(close(exhaustive::esamp(&g).unwrap().mean, b));
        prop_assert!(close(exhaustive::fast_esamp(&g).unwrap().mean, b));
        if g.stats().wedge_count > 0 {
            prop_assert!(close(exhaustive::wsamp(&g).unwrap().mean, b));
        }
    }

    #[test]
    fn full_retention_sparsifiers_are_exact(g in small_graph(12), seed in any::<u64>()) {
        let b = exact_count(&g).unwrap() as f64;
        prop_assert_eq!(edge_sparsify_estimate(&g, 1.0, seed).unwrap(), b);
        prop_assert_eq!(color_sparsify_estimate(&g, 1, seed).unwrap(), b);
    }

    #[test]
    fn edge_list_round_trip(g in small_graph(12)) {
        let text = g.to_edge_list_string();
        let back = load_edge_list_str(&text).unwrap();
        prop_assert_eq!(back.stats(), g.stats());
        prop_assert_eq!(back.to_edge_list_string(), text);
        prop_assert_eq!(exact_count(&back).unwrap(), exact_count(&g).unwrap());
    }

    #[test]
    fn wedge_index_locates_by_prefix(g in small_graph(12), r in any::<u64>()) {
        let idx = WedgeIndex::build(&g);
        let total = idx.total_wedges();
        prop_assume!(total > 0);
        let r = 1 + r % total;
        let j = idx.locate(r);
        let prefix = idx.prefix();
        prop_assert!(prefix[j] >= r);
        prop_assert!(j == 0 || prefix[j - 1] < r);
    }

    #[test]
    fn median_lies_within_the_values(values in prop::collection::vec(-1e6f64..1e6, 1..30)) {
        let m = median(values.clone());
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(lo <= m && m <= hi);
        prop_assert!(values.contains(&m));
    }
}

#[test]
fn derived_pair_bounds_are_tight_on_square_bicliques() {
    for n in 4..=7u64 {
        let g = butterfly::complete_biclique(n as usize, n as usize).unwrap();
        let c = classify_pairs(&g).unwrap();
        let d = n - 2;
        assert_eq!(c.p_1w, 2 * c.butterflies * d);
        assert_eq!(c.p_1e, 2 * c.butterflies * d * d);
        assert_eq!(c.p_2v, c.butterflies * d * (d - 1) / 2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn estimates_do_not_depend_on_thread_count(g in small_graph(12), seed in any::<u64>(), groups in prop::sample::select(vec![1u32, 3, 5])) {
        for method in [Method::Vertex, Method::Edge, Method::Wedge, Method::FastEdge] {
            if method == Method::Wedge && g.stats().wedge_count == 0 {
                continue;
            }
            let mut cfg = EstimatorConfig::new(method, 300, seed);
            cfg.groups = groups;
            cfg.fast_edge_repeats = 7;
            let runs: Vec<_> = [1usize, 2, 4]
                .iter()
                .map(|&n| {
                    let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
                    pool.install(|| run_estimator(&g, &cfg).unwrap())
                })
                .collect();
            for r in &runs[1..] {
                prop_assert_eq!(r.value.to_bits(), runs[0].value.to_bits());
                prop_assert_eq!(&r.per_group_means, &runs[0].per_group_means);
            }
        }
    }
}
