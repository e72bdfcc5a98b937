mod common;

use common::*;
use csp_hs::contract::contract_degree2;
use csp_hs::dijkstra::{dijkstra, extract_path, reverse_dijkstra};
use csp_hs::graph::{Graph, GraphBuilder, VertexId};
use csp_hs::weight::{Rational, WeightView};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn dijkstra_matches_path_enumeration_on_30_vertices() {
    for seed in 0..40 {
        let g = random_graph(seed, 30, 0.06, 9);
        let tree = dijkstra(&g, 0, &WeightView::at_int(1));
        for t in 1..30 {
            let paths = all_simple_paths(&g, 0, t);
            assert_eq!(tree.dist(t), min_weight(&paths, Rational::from_integer(1)), "seed {seed} t {t}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dijkstra_matches_bellman_ford(seed in any::<u64>(), n in 2usize..40, num in 0i128..20, den in 1i128..6) {
        let g = random_graph(seed, n, 0.15, 20);
        let alpha = Rational::new(num, den);
        let tree = dijkstra(&g, 0, &WeightView::at(alpha));
        let oracle = bellman_ford(&g, 0, alpha);
        for v in 0..n as VertexId {
            prop_assert_eq!(tree.dist(v), oracle[v as usize]);
        }
    }

    #[test]
    fn reverse_search_equals_search_on_reversed_graph(seed in any::<u64>(), t in 0u32..30) {
        let g = random_graph(seed, 30, 0.1, 9);
        for w in [WeightView::at_int(0), WeightView::at(Rational::new(5, 2)), WeightView::length_first()] {
            let back = reverse_dijkstra(&g, t, &w);
            let fwd = dijkstra(&g.reversed(), t, &w);
            prop_assert_eq!(&back.key, &fwd.key);
        }
    }

    #[test]
    fn extracted_paths_sum_to_distance(seed in any::<u64>()) {
        let g = random_graph(seed, 25, 0.12, 9);
        let w = WeightView::at(Rational::new(3, 2));
        let tree = dijkstra(&g, 0, &w);
        for t in 0..25 {
            match extract_path(&g, &tree, 0, t) {
                Some(p) => {
                    let sum = w.aggregated(p.cost, p.length);
                    prop_assert_eq!(Some(sum), tree.dist(t));
                    let arcs_cost: u64 = p.arcs.iter().map(|&a| g.cost(a)).sum();
                    prop_assert_eq!(arcs_cost, p.cost);
                }
                None => prop_assert!(!tree.is_reachable(t)),
            }
        }
    }

    #[test]
    fn reverse_tree_first_arcs_lead_to_target(seed in any::<u64>()) {
        let g = random_graph(seed, 20, 0.15, 9);
        let w = WeightView::at_int(2);
        let back = reverse_dijkstra(&g, 5, &w);
        for v in 0..20 {
            if v == 5 || !back.is_reachable(v) {
                continue;
            }
            let a = back.parent[v as usize];
            prop_assert_eq!(g.tail(a), v);
            let rest = back.scaled_dist(g.head(a)).unwrap();
            prop_assert_eq!(back.scaled_dist(v).unwrap(), rest + w.arc_key(&g, a).0);
        }
    }
}

/// Hub graph whose connections are subdivided into chains, some directed
/// and some undirected, with 50 vertices in total.
fn chained_graph(seed: u64) -> Graph {
    let mut r = rng(seed);
    let hubs = 12u32;
    let mut next = hubs;
    let mut arcs = Vec::new();
    while next < 50 {
        let (u, v) = (r.random_range(0..hubs), r.random_range(0..hubs));
        if u == v {
            continue;
        }
        let inner = r.random_range(0..=3u32).min(50 - next);
        let mut chain = vec![u];
        chain.extend(next..next + inner);
        chain.push(v);
        next += inner;
        let undirected = r.random_bool(0.5);
        for w in chain.windows(2) {
            let (c, l) = (r.random_range(1..=9u64), r.random_range(1..=9u64));
            arcs.push((w[0], w[1], c, l));
            if undirected {
                arcs.push((w[1], w[0], c, l));
            }
        }
    }
    let mut b = GraphBuilder::new(50);
    for (u, v, c, l) in arcs {
        b.add_arc(u, v, c, l);
    }
    b.build()
}

#[test]
fn contraction_preserves_distances_between_kept_vertices() {
    let views = [WeightView::at_int(0), WeightView::at_int(1), WeightView::at(Rational::new(5, 2)), WeightView::length_first()];
    let mut removed = 0;
    for seed in 0..60 {
        let g = chained_graph(seed);
        let c = contract_degree2(&g, &[]);
        removed += g.n() - c.graph.n();
        let kept: Vec<VertexId> = (0..g.n() as VertexId).filter(|&v| c.map_vertex(v).is_some()).collect();
        for w in &views {
            for &s in kept.iter().take(6) {
                let orig = dijkstra(&g, s, w);
                let small = dijkstra(&c.graph, c.map_vertex(s).unwrap(), w);
                for &t in &kept {
                    let ct = c.map_vertex(t).unwrap();
                    assert_eq!(orig.key[t as usize].0, small.key[ct as usize].0, "seed {seed} {s}->{t}");
                }
            }
        }
    }
    assert!(removed > 600, "only {removed} vertices contracted");
}

#[test]
fn contraction_keeps_protected_endpoints_and_expands_paths() {
    let mut r = rng(99);
    for seed in 0..60 {
        let g = chained_graph(seed + 1000);
        let (s, t) = (r.random_range(0..50u32), r.random_range(0..50u32));
        let c = contract_degree2(&g, &[s, t]);
        let (cs, ct) = (c.map_vertex(s).unwrap(), c.map_vertex(t).unwrap());
        let w = WeightView::at_int(1);
        let orig = dijkstra(&g, s, &w);
        let small = dijkstra(&c.graph, cs, &w);
        assert_eq!(orig.dist(t), small.dist(ct));
        if let Some(p) = extract_path(&c.graph, &small, cs, ct) {
            let full = c.expand_path(&g, &p).unwrap();
            assert_eq!((full.source, full.target), (s, t));
            assert_eq!((full.cost, full.length), (p.cost, p.length));
        }
    }
}
