//! Solver cross-checks and spectral facts against independent oracles.

mod support;

use num_rational::Ratio;
use proptest::prelude::*;
use spectre_core::generators::complete_graph;
use spectre_core::operators::{assemble, dirichlet_annulus};
use spectre_core::spectral::dense::symmetric_eigenvalues;
use spectre_core::spectral::{
    extremal_eigenvalues, full_spectrum, sandwich_check, transition_norm_checks, LanczosOptions, SpectralOptions,
};
use spectre_core::{branching_graph, tessellation_patch, BranchingParams, TessellationParams, Variant};
use support::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lanczos_agrees_with_dense(seed in any::<u64>(), n in 3usize..60, extra in 0.0f64..0.5) {
        let mut r = rng(seed);
        let g = random_connected_graph(&mut r, n, extra);
        for variant in Variant::ALL {
            let m = assemble(&g, variant, &[0]).unwrap();
            let dense = full_spectrum(&m).unwrap();
            let it = extremal_eigenvalues(&m, &LanczosOptions::default()).unwrap();
            prop_assert!(close(it.lambda_min, dense[0], 1e-8), "{variant:?} {} {}", it.lambda_min, dense[0]);
            prop_assert!(close(it.lambda_max, *dense.last().unwrap(), 1e-8));
        }
    }

    #[test]
    fn normalized_spectra_and_similarity(seed in any::<u64>(), n in 2usize..40) {
        let mut r = rng(seed);
        let g = random_connected_graph(&mut r, n, 0.3);
        let hat = full_spectrum(&assemble(&g, Variant::DeltaHat, &[]).unwrap()).unwrap();
        prop_assert!(hat.iter().all(|&l| l > -1e-12 && l < 2.0 + 1e-12));
        // the bottom of the full operator is 0 (constants up to D^{1/2})
        prop_assert!(hat[0].abs() < 1e-10);
        let tilde = assemble(&g, Variant::DeltaTilde, &[0]).unwrap();
        let via = symmetric_eigenvalues(&tilde.similarity_dense(), tilde.dimension()).unwrap();
        let direct = full_spectrum(&assemble(&g, Variant::DeltaHat, &[0]).unwrap()).unwrap();
        for (a, b) in via.iter().zip(&direct) {
            prop_assert!(close(*a, *b, 1e-10));
        }
    }

    /// Sandwich and norm bounds with the exact Cheeger constant.
    #[test]
    fn cheeger_sandwich(seed in any::<u64>(), n in 2usize..10, extra in 0.0f64..0.6) {
        let mut r = rng(seed);
        let g = random_connected_graph(&mut r, n, extra);
        let v = (seed % n as u64) as usize;
        let report = transition_norm_checks(&g, &[v]).unwrap();
        prop_assert!(report.holds, "{report:?}");
        let hat = assemble(&g, Variant::DeltaHat, &[v]).unwrap();
        prop_assert!(sandwich_check(&hat, report.alpha, &SpectralOptions::default()).unwrap().holds);
    }
}

#[test]
fn regular_graph_scaling_is_exact() {
    // Δ = d Δ̂ on a d-regular host, restriction included
    let g = complete_graph(7).unwrap();
    let a = full_spectrum(&assemble(&g, Variant::Delta, &[2]).unwrap()).unwrap();
    let b = full_spectrum(&assemble(&g, Variant::DeltaHat, &[2]).unwrap()).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!(close(*x, 6.0 * y, 1e-12));
    }
}

#[test]
fn path_example() {
    let mut b = spectre_core::GraphBuilder::new(3);
    b.add_edge(0, 1).add_edge(1, 2);
    let g = b.build().unwrap();
    let delta = full_spectrum(&assemble(&g, Variant::Delta, &[0]).unwrap()).unwrap();
    let hat = full_spectrum(&assemble(&g, Variant::DeltaHat, &[0]).unwrap()).unwrap();
    assert!(close(delta[0], (3.0 - 5f64.sqrt()) / 2.0, 1e-14));
    assert!(close(hat[0], 1.0 - 0.5f64.sqrt(), 1e-14));
}

#[test]
fn branching_annulus_matches_generation_quotient() {
    for (gamma, c, k_max) in [((1, 2), (1, 1), 7), ((0, 1), (2, 1), 7), ((1, 1), (1, 1), 5)] {
        let p = BranchingParams::new(Ratio::new(gamma.0, gamma.1), Ratio::new(c.0, c.1), k_max).unwrap();
        let g = branching_graph(&p).unwrap();
        for k in 1..k_max - 2 {
            let r = k_max - 1;
            let m = dirichlet_annulus(&g, k, r, Variant::Delta).unwrap();
            let oracle = generation_quotient_bottom(&p, k, r);
            let it = extremal_eigenvalues(&m, &LanczosOptions::default()).unwrap();
            assert!(close(it.lambda_min, oracle, 1e-8 * oracle.max(1.0)), "{p:?} k={k}: {} vs {oracle}", it.lambda_min);
            if m.dimension() <= 600 {
                let dense = full_spectrum(&m).unwrap();
                assert!(close(dense[0], oracle, 1e-9 * oracle.max(1.0)));
            }
        }
    }
}

#[test]
fn lanczos_on_tessellation_restrictions() {
    for (p, q, layers) in [(3, 7, 5), (4, 5, 4), (4, 4, 8)] {
        let g = tessellation_patch(&TessellationParams::new(p, q, layers).unwrap()).unwrap();
        let open: Vec<usize> = (0..g.vertex_count()).filter(|&v| !g.is_interior(v)).collect();
        for variant in Variant::ALL {
            let m = assemble(&g, variant, &open).unwrap();
            let dense = full_spectrum(&m).unwrap();
            let it = extremal_eigenvalues(&m, &LanczosOptions::default()).unwrap();
            assert!(close(it.lambda_min, dense[0], 1e-8), "{p},{q} {variant:?}");
            assert!(close(it.lambda_max, *dense.last().unwrap(), 1e-8));
        }
    }
}
