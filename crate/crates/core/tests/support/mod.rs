//! Helpers shared by the integration tests: random hosts and subsets, and
//! an independent oracle for branching-graph annuli.
#![allow(dead_code)]

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectre_core::generators::{forward_multiplicity, generation_sizes};
use spectre_core::{BranchingParams, Graph, GraphBuilder};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random tree on `n` vertices plus each remaining pair with probability
/// `extra`; always connected.
pub fn random_connected_graph(rng: &mut ChaCha8Rng, n: usize, extra: f64) -> Graph {
    let mut edges = std::collections::BTreeSet::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        edges.insert((u, v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(extra) {
                edges.insert((u, v));
            }
        }
    }
    let mut b = GraphBuilder::new(n);
    for (u, v) in edges {
        b.add_edge(u, v);
    }
    b.build().unwrap()
}

/// Nonempty random subset of `allowed`.
pub fn random_subset(rng: &mut ChaCha8Rng, allowed: &[usize]) -> Vec<usize> {
    let p = rng.random_range(0.05..0.95);
    let mut w: Vec<usize> = allowed.iter().copied().filter(|_| rng.random_bool(p)).collect();
    if w.is_empty() {
        w.push(*allowed.choose(rng).unwrap());
    }
    w
}

/// Random connected subset of `allowed` with at most `max_size` vertices,
/// grown one random frontier vertex at a time.
pub fn random_connected_subset(rng: &mut ChaCha8Rng, g: &Graph, allowed: &[usize], max_size: usize) -> Vec<usize> {
    let mut ok = vec![false; g.vertex_count()];
    allowed.iter().for_each(|&v| ok[v] = true);
    let target = rng.random_range(1..=max_size.max(1));
    let start = *allowed.choose(rng).unwrap();
    let mut inside = vec![false; g.vertex_count()];
    inside[start] = true;
    let mut w = vec![start];
    while w.len() < target {
        let frontier: Vec<usize> = w
            .iter()
            .flat_map(|&v| g.neighbors(v))
            .filter(|&u| ok[u] && !inside[u])
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        match frontier.choose(rng) {
            Some(&u) => {
                inside[u] = true;
                w.push(u);
            }
            None => break,
        }
    }
    w.sort_unstable();
    w
}

/// Vertices that may be kept in a Dirichlet restriction.
pub fn interior_vertices(g: &Graph) -> Vec<usize> {
    (0..g.vertex_count()).filter(|&v| g.is_interior(v)).collect()
}

/// Smallest eigenvalue of `Δ` on the annulus of generations `k+1..=r` of
/// `G_{γ,c}`, from the generation quotient.
///
/// The bottom eigenvector is positive and invariant under the subtree
/// swaps, so it is constant on generations. On such functions `Δ` acts as
/// the tridiagonal matrix with diagonal `back_j + b_j` and couplings `−1`
/// (parent) and `−b_j` (children); weighting by `N_j` symmetrises it to
/// off-diagonals `−√b_j`. The smallest eigenvalue is found by Sturm-count
/// bisection, independently of the crate's solvers.
pub fn generation_quotient_bottom(params: &BranchingParams, k: u32, r: u32) -> f64 {
    let sizes = generation_sizes(params).unwrap();
    let gens: Vec<u32> = (k + 1..=r).collect();
    let b: Vec<f64> = gens.iter().map(|&j| forward_multiplicity(params, &sizes, j).unwrap() as f64).collect();
    let diag: Vec<f64> = gens.iter().zip(&b).map(|(&j, &bj)| if j == 1 { bj } else { 1.0 + bj }).collect();
    let off: Vec<f64> = b[..b.len() - 1].iter().map(|x| x.sqrt()).collect();
    let below = |x: f64| -> usize {
        // number of eigenvalues < x
        let mut count = 0;
        let mut q = diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..diag.len() {
            let denom = if q == 0.0 { f64::MIN_POSITIVE } else { q };
            q = diag[i] - x - off[i - 1] * off[i - 1] / denom;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    let (mut lo, mut hi) = (0.0, diag.iter().zip(0..).map(|(d, i)| d + 2.0 * off.get(i).copied().unwrap_or(0.0) + 2.0 * if i > 0 { off[i - 1] } else { 0.0 }).fold(0.0, f64::max));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if below(mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
