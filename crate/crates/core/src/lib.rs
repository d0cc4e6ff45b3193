//! Discrete spectral geometry on truncations of infinite graphs.
//!
//! `spectre-core` builds rapidly branching graphs and `{p,q}` tessellation
//! patches, assembles the three graph Laplacians
//!
//! ```text
//! Δ  = D - A                  on l²(V)
//! Δ̃  = I - D⁻¹A               on l²(V, deg)
//! Δ̂  = I - D^{-1/2} A D^{-1/2} on l²(V)
//! ```
//!
//! together with their Dirichlet restrictions, and provides the quantities
//! that control their essential spectra: Cheeger constants outside compact
//! sets, combinatorial curvature, minimal and maximal degrees at infinity and
//! annulus eigenvalue sweeps that approximate the bottom of the essential
//! spectrum from growing domains.
//!
//! The crate is `no_std` and only needs `alloc`. Everything that touches the
//! file system, the command line or threads lives in the `spectre` crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
pub mod math;

pub mod corpus;
pub mod curvature;
pub mod generators;
pub mod graph;
pub mod isoperimetry;
pub mod operators;
pub mod spectral;
pub mod sweep;

pub use error::{Error, Result};
pub use math::Rational;

pub use curvature::{kappa_outside, vertex_curvature, CurvatureReport};
pub use generators::{
    branching_graph, complete_graph, generation_sizes, regular_tree, tessellation_patch,
    BranchingParams, TessellationParams,
};
pub use graph::{Graph, GraphBuilder, VertexSet};
pub use isoperimetry::CheegerEstimate;
pub use operators::{FunctionVector, LaplacianMatrix, Variant, Weight};
pub use spectral::SpectralSummary;
pub use sweep::{StepRecord, SweepResult};
