//! Deterministic constructions: complete graphs, the rapidly branching
//! family `G_{γ,c}`, regular trees and `{p,q}` tessellation patches.

mod branching;
mod tessellation;

pub use branching::{
    branching_graph, forward_multiplicity, generation_offsets, generation_sizes, BranchingParams,
};
pub use tessellation::{check_tessellation, tessellation_patch, TessellationParams};

use alloc::vec::Vec;

use crate::graph::{Graph, GraphBuilder};
use crate::{Error, Result};

/// Largest vertex count any generator will materialise.
pub const MAX_VERTICES: u64 = 20_000_000;

/// The complete graph `K_n`, stored as one complete block.
pub fn complete_graph(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("complete graph needs at least one vertex".into()));
    }
    if n as u64 > MAX_VERTICES {
        return Err(Error::TooLarge(n as u64));
    }
    let mut b = GraphBuilder::new(n);
    b.add_complete_block(0..n);
    b.build()
}

/// Rooted tree in which every vertex above depth `depth` has `branching`
/// children. Labels are distances from the root; leaves are non-interior.
pub fn regular_tree(branching: usize, depth: u32) -> Result<Graph> {
    if branching < 2 {
        return Err(Error::InvalidParameter("tree branching must be at least 2".into()));
    }
    let mut n: u64 = 1;
    let mut level: u64 = 1;
    for _ in 0..depth {
        level = level.checked_mul(branching as u64).ok_or(Error::Overflow("tree size"))?;
        n = n.checked_add(level).ok_or(Error::Overflow("tree size"))?;
        if n > MAX_VERTICES {
            return Err(Error::TooLarge(n));
        }
    }
    let n = n as usize;
    let mut labels = Vec::with_capacity(n);
    labels.push(0u32);
    let mut b = GraphBuilder::new(n).with_edge_capacity(n - 1);
    // breadth-first numbering: the children of v are b·v+1 ..= b·v+b
    for child in 1..n {
        let parent = (child - 1) / branching;
        b.add_edge(parent, child);
        labels.push(labels[parent] + 1);
    }
    let interior = labels.iter().map(|&l| l < depth).collect();
    b.generation(labels).interior(interior);
    b.build()
}
