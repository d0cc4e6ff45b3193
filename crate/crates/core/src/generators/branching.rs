use alloc::format;
use alloc::vec::Vec;

use num_rational::Ratio;
use num_traits::{One, Zero};

use super::MAX_VERTICES;
use crate::graph::{Graph, GraphBuilder};
use crate::math::bracket;
use crate::{Error, Result};

/// Parameters of the rapidly branching family `G_{γ,c}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchingParams {
    pub gamma: Ratio<u64>,
    pub c: Ratio<u64>,
    pub k_max: u32,
}

impl BranchingParams {
    pub fn new(gamma: Ratio<u64>, c: Ratio<u64>, k_max: u32) -> Result<Self> {
        let params = BranchingParams { gamma, c, k_max };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.c < Ratio::one() {
            return Err(Error::InvalidParameter(format!("c = {} must be at least 1", self.c)));
        }
        if self.gamma < Ratio::zero() {
            return Err(Error::InvalidParameter(format!("gamma = {} must be nonnegative", self.gamma)));
        }
        if self.k_max < 2 {
            return Err(Error::InvalidParameter(format!(
                "k_max = {} must be at least 2",
                self.k_max
            )));
        }
        Ok(())
    }

    /// Same family with a different number of generations.
    pub fn with_generations(&self, k_max: u32) -> Result<Self> {
        BranchingParams::new(self.gamma, self.c, k_max)
    }
}

/// `N_1, …, N_{k_max}` with `N_1 = 1`, `N_2 = max{[c], 2}` and
/// `N_k = N_{k−1}·[c·N_{k−1}^γ]`. Overflow is reported, never wrapped.
pub fn generation_sizes(params: &BranchingParams) -> Result<Vec<u64>> {
    params.validate()?;
    let mut sizes = Vec::with_capacity(params.k_max as usize);
    sizes.push(1u64);
    sizes.push(bracket(&params.c, 1, &params.gamma)?.max(2));
    while sizes.len() < params.k_max as usize {
        let last = *sizes.last().unwrap();
        let next = last
            .checked_mul(bracket(&params.c, last, &params.gamma)?)
            .ok_or(Error::Overflow("generation size"))?;
        sizes.push(next);
    }
    Ok(sizes)
}

/// Number of generation-`(k+1)` neighbours of a generation-`k` vertex
/// (1-based `k`): `N_2` for the root, `[c·N_k^γ]` for `k ≥ 2`.
pub fn forward_multiplicity(params: &BranchingParams, sizes: &[u64], k: u32) -> Result<u64> {
    match k {
        0 => Err(Error::InvalidParameter("generations are numbered from 1".into())),
        1 => Ok(sizes[1]),
        _ => bracket(&params.c, sizes[k as usize - 1], &params.gamma),
    }
}

/// First vertex id of each generation, plus the total vertex count.
pub fn generation_offsets(sizes: &[u64]) -> Vec<u64> {
    let mut offsets = Vec::with_capacity(sizes.len() + 1);
    let mut acc = 0u64;
    offsets.push(0);
    for &s in sizes {
        acc = acc.saturating_add(s);
        offsets.push(acc);
    }
    offsets
}

/// `G_{γ,c}` truncated after generation `k_max`.
///
/// Generation `k` occupies a contiguous id range and forms a complete block;
/// the root is joined to all of generation 2, and for `k ≥ 2` vertex `i` of
/// generation `k` is joined to the `i`-th run of `[c·N_k^γ]` consecutive
/// vertices of generation `k+1`. Labels are the 1-based generations; the
/// last generation is the (non-interior) truncation boundary.
pub fn branching_graph(params: &BranchingParams) -> Result<Graph> {
    let sizes = generation_sizes(params)?;
    let offsets = generation_offsets(&sizes);
    let n = *offsets.last().unwrap();
    if n > MAX_VERTICES {
        return Err(Error::TooLarge(n));
    }
    let n = n as usize;
    let mut b = GraphBuilder::new(n).with_edge_capacity(n - 1);
    for k in 0..sizes.len() {
        b.add_complete_block(offsets[k] as usize..offsets[k + 1] as usize);
    }
    for k in 1..sizes.len() as u32 {
        let here = offsets[k as usize - 1] as usize;
        let there = offsets[k as usize] as usize;
        if k == 1 {
            for v in there..there + sizes[1] as usize {
                b.add_edge(here, v);
            }
            continue;
        }
        let run = forward_multiplicity(params, &sizes, k)? as usize;
        for i in 0..sizes[k as usize - 1] as usize {
            for j in 0..run {
                b.add_edge(here + i, there + i * run + j);
            }
        }
    }
    let mut labels = Vec::with_capacity(n);
    for (k, &s) in sizes.iter().enumerate() {
        labels.extend(core::iter::repeat_n(k as u32 + 1, s as usize));
    }
    let last = params.k_max;
    let interior = labels.iter().map(|&l| l < last).collect();
    b.generation(labels).interior(interior);
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{deg_pm, generation_ball, shell};

    fn params(g: (u64, u64), c: (u64, u64), k: u32) -> BranchingParams {
        BranchingParams::new(Ratio::new(g.0, g.1), Ratio::new(c.0, c.1), k).unwrap()
    }

    #[test]
    fn sizes_use_the_strict_bracket() {
        assert_eq!(generation_sizes(&params((1, 1), (1, 1), 5)).unwrap(), [1, 2, 6, 42, 1806]);
        assert_eq!(generation_sizes(&params((0, 1), (2, 1), 5)).unwrap(), [1, 3, 9, 27, 81]);
        assert_eq!(
            generation_sizes(&params((1, 2), (1, 1), 7)).unwrap(),
            [1, 2, 4, 12, 48, 336, 6384]
        );
        assert_eq!(generation_sizes(&params((2, 1), (1, 1), 4)).unwrap(), [1, 2, 10, 1010]);
        assert_eq!(generation_sizes(&params((3, 2), (5, 2), 3)).unwrap()[1], 3);
        assert!(matches!(
            generation_sizes(&params((2, 1), (1, 1), 7)),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(BranchingParams::new(Ratio::new(1, 1), Ratio::new(1, 2), 3).is_err());
        assert!(BranchingParams::new(Ratio::new(1, 1), Ratio::new(1, 1), 1).is_err());
    }

    #[test]
    fn small_family_members() {
        let g = branching_graph(&params((1, 1), (1, 1), 3)).unwrap();
        assert_eq!(g.vertex_count(), 9);
        assert_eq!(g.deg(1), 5);
        assert_eq!(g.deg(3), 6);
        assert!(!g.is_interior(3));
        assert_eq!(deg_pm(&g, 1).unwrap(), (1, 3));
        assert_eq!(deg_pm(&g, 0).unwrap(), (0, 2));

        let g = branching_graph(&params((1, 1), (1, 1), 4)).unwrap();
        assert_eq!(g.vertex_count(), 51);
        // generation-3 interior vertex: (N_3 − 1) + 1 + [N_3]
        assert_eq!(g.deg(3), 5 + 1 + 7);
        assert_eq!(generation_ball(&g, 3).unwrap().len(), 9);
    }

    #[test]
    fn shell_boundary_of_gamma_zero() {
        let g = branching_graph(&params((0, 1), (2, 1), 4)).unwrap();
        // N_3·[c] forward edges plus N_3 back edges
        assert_eq!(shell(&g, 3).unwrap().boundary_edges(), 27 + 9);
    }

    #[test]
    fn forward_edges_partition_the_next_generation() {
        for p in [params((1, 1), (1, 1), 5), params((1, 2), (3, 2), 5), params((0, 1), (2, 1), 6)] {
            let g = branching_graph(&p).unwrap();
            let labels = g.generation().unwrap();
            for (v, &label) in labels.iter().enumerate() {
                let (back, _) = deg_pm(&g, v).unwrap();
                assert_eq!(back, usize::from(label > 1));
            }
        }
    }
}
