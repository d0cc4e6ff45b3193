//! Combinatorial identities on random hosts and on the generator corpus.

mod support;

use proptest::prelude::*;
use spectre_core::corpus::generator_corpus;
use spectre_core::graph::{area, boundary_edge_count, edge_boundary, internal_edge_count};
use spectre_core::operators::{assemble, factorization_check, indicator_forms};
use spectre_core::{GraphBuilder, Variant};
use support::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn handshake_and_indicator_forms(seed in any::<u64>(), n in 2usize..30, extra in 0.0f64..0.4) {
        let mut r = rng(seed);
        let g = random_connected_graph(&mut r, n, extra);
        let all: Vec<usize> = (0..n).collect();
        let k = vec![all[seed as usize % n]];
        let rest: Vec<usize> = all.iter().copied().filter(|v| !k.contains(v)).collect();
        let w = random_subset(&mut r, &rest);
        let b = boundary_edge_count(&g, &w).unwrap();
        let e = internal_edge_count(&g, &w).unwrap();
        prop_assert_eq!(area(&g, &w).unwrap(), 2 * e + b);
        prop_assert_eq!(edge_boundary(&g, &w).unwrap().len() as u64, b);
        let (form, norm) = indicator_forms(&g, &k, &w).unwrap();
        prop_assert_eq!(form, b as i128);
        prop_assert_eq!(norm, area(&g, &w).unwrap() as i128);
    }

    #[test]
    fn factorization(seed in any::<u64>(), n in 2usize..25) {
        let mut r = rng(seed);
        let g = random_connected_graph(&mut r, n, 0.2);
        let m = assemble(&g, Variant::Delta, &[0]).unwrap();
        let phi: Vec<f64> = (0..m.dimension()).map(|i| ((seed >> (i % 60)) & 7) as f64 - 3.5).collect();
        prop_assert!(factorization_check(&g, &[0], &phi).unwrap().holds);
    }

    /// A complete block stored implicitly behaves exactly like its edges.
    #[test]
    fn block_matches_explicit_edges(seed in any::<u64>(), n in 3usize..20, lo in 0usize..5, len in 2usize..12) {
        let mut r = rng(seed);
        let base = random_connected_graph(&mut r, n + lo + len, 0.1);
        let block = lo..lo + len;
        let mut implicit = GraphBuilder::new(base.vertex_count());
        let mut explicit = GraphBuilder::new(base.vertex_count());
        for (u, v) in base.edges() {
            if !(block.contains(&u) && block.contains(&v)) {
                implicit.add_edge(u, v);
                explicit.add_edge(u, v);
            }
        }
        implicit.add_complete_block(block.clone());
        for u in block.clone() {
            for v in u + 1..block.end {
                explicit.add_edge(u, v);
            }
        }
        let (a, b) = (implicit.build().unwrap(), explicit.build().unwrap());
        prop_assert_eq!(a.edge_count(), b.edge_count());
        for v in 0..a.vertex_count() {
            prop_assert_eq!(a.neighbors(v).collect::<Vec<_>>(), b.neighbors(v).collect::<Vec<_>>());
        }
        let w = random_subset(&mut r, &(0..a.vertex_count()).collect::<Vec<_>>());
        prop_assert_eq!(boundary_edge_count(&a, &w).unwrap(), boundary_edge_count(&b, &w).unwrap());
        prop_assert_eq!(internal_edge_count(&a, &w).unwrap(), internal_edge_count(&b, &w).unwrap());
        for variant in Variant::ALL {
            let (ma, mb) = (assemble(&a, variant, &[0]).unwrap(), assemble(&b, variant, &[0]).unwrap());
            let x: Vec<f64> = (0..ma.dimension()).map(|i| (i as f64 * 0.37).sin()).collect();
            let (ya, yb) = (ma.apply(&x).unwrap(), mb.apply(&x).unwrap());
            for (p, q) in ya.iter().zip(&yb) {
                prop_assert!((p - q).abs() <= 1e-12 * (1.0 + q.abs()));
            }
            prop_assert_eq!(ma.to_dense(), mb.to_dense());
        }
    }
}

#[test]
fn handshake_on_corpus() {
    let mut r = rng(7);
    for entry in generator_corpus(2000).unwrap() {
        let g = &entry.graph;
        let all: Vec<usize> = (0..g.vertex_count()).collect();
        for _ in 0..10 {
            let w = random_subset(&mut r, &all);
            let b = boundary_edge_count(g, &w).unwrap();
            let e = internal_edge_count(g, &w).unwrap();
            assert_eq!(area(g, &w).unwrap(), 2 * e + b, "{}", entry.name);
        }
    }
}

#[test]
fn generator_sizes_in_corpus() {
    let corpus = generator_corpus(2000).unwrap();
    let find = |name: &str| corpus.iter().find(|e| e.name == name).unwrap().graph.vertex_count();
    assert_eq!(find("branching gamma=1 c=1 k_max=4"), 51);
    assert_eq!(find("branching gamma=0 c=2 k_max=5"), 121);
    assert_eq!(find("tessellation {3,7} layers=3"), 48);
    assert!(corpus.iter().all(|e| e.graph.vertex_count() <= 2000));
}
