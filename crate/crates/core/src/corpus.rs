//! A fixed corpus of small generator outputs, shared by property checks
//! and the command-line `verify` run.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::generators::{
    branching_graph, complete_graph, generation_sizes, regular_tree, tessellation_patch, BranchingParams,
    TessellationParams,
};
use crate::graph::Graph;
use crate::Result;

/// Which generator produced a corpus graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Complete(usize),
    Tree { branching: usize, depth: u32 },
    Branching(BranchingParams),
    Tessellation(TessellationParams),
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub family: Family,
    pub graph: Graph,
}

const BRANCHING: [((u64, u64), (u64, u64)); 6] =
    [((1, 1), (1, 1)), ((0, 1), (2, 1)), ((1, 2), (1, 1)), ((2, 1), (1, 1)), ((1, 1), (2, 1)), ((0, 1), (1, 1))];

const TESSELLATIONS: [(u32, u32); 9] = [(3, 7), (4, 5), (5, 4), (3, 6), (4, 4), (6, 3), (7, 3), (3, 8), (4, 6)];

/// Every corpus graph with at most `max_vertices` vertices: complete
/// graphs, regular trees, truncations of six branching families and
/// patches of nine tessellations, each at every size that fits.
pub fn generator_corpus(max_vertices: usize) -> Result<Vec<CorpusEntry>> {
    let mut out = Vec::new();
    for n in [1, 2, 3, 5, 8, 13] {
        if n <= max_vertices {
            out.push(CorpusEntry { name: format!("complete n={n}"), family: Family::Complete(n), graph: complete_graph(n)? });
        }
    }
    for (branching, max_depth) in [(2usize, 8u32), (3, 6), (5, 4)] {
        for depth in 1..=max_depth {
            let g = regular_tree(branching, depth)?;
            if g.vertex_count() > max_vertices {
                break;
            }
            out.push(CorpusEntry {
                name: format!("tree b={branching} depth={depth}"),
                family: Family::Tree { branching, depth },
                graph: g,
            });
        }
    }
    for ((gn, gd), (cn, cd)) in BRANCHING {
        for k_max in 2..=12 {
            let params = BranchingParams::new(Ratio::new(gn, gd), Ratio::new(cn, cd), k_max)?;
            let total: u64 = match generation_sizes(&params) {
                Ok(sizes) => sizes.iter().sum(),
                Err(_) => break,
            };
            if total > max_vertices as u64 {
                break;
            }
            out.push(CorpusEntry {
                name: format!("branching gamma={} c={} k_max={k_max}", params.gamma, params.c),
                graph: branching_graph(&params)?,
                family: Family::Branching(params),
            });
        }
    }
    for (p, q) in TESSELLATIONS {
        for layers in 1..=12 {
            let params = TessellationParams::new(p, q, layers)?;
            let g = tessellation_patch(&params)?;
            if g.vertex_count() > max_vertices {
                break;
            }
            out.push(CorpusEntry { name: format!("tessellation {{{p},{q}}} layers={layers}"), family: Family::Tessellation(params), graph: g });
        }
    }
    Ok(out)
}
