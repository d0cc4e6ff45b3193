//! Combinatorial curvature `κ(v) = 1 − deg(v)/2 + Σ_{f∋v} 1/deg(f)`.

use alloc::vec::Vec;

use crate::graph::{Graph, Mask};
use crate::math::{to_f64, Rational};
use crate::{Error, Result};

/// Exact curvature of an interior vertex of a tessellation patch.
pub fn vertex_curvature(g: &Graph, v: usize) -> Result<Rational> {
    g.check_vertex(v)?;
    let faces = g.faces().ok_or(Error::NotTessellation)?;
    if !g.is_interior(v) {
        return Err(Error::NotInterior(v));
    }
    let mut kappa = Rational::from_integer(1) - Rational::new(g.deg(v) as i128, 2);
    for &f in g.faces_at(v).unwrap() {
        kappa += Rational::new(1, faces[f as usize].len() as i128);
    }
    Ok(kappa)
}

/// `κ_K = sup{κ(v) : v ∉ K}` over interior vertices.
pub fn kappa_outside(g: &Graph, k: &[usize]) -> Result<Rational> {
    Ok(CurvatureReport::new(g, k)?.kappa)
}

/// Curvature of every interior vertex outside `K`, with their supremum.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureReport {
    /// The excluded set `K`, sorted.
    pub domain: Vec<usize>,
    /// `(vertex, κ(v))` for interior `v ∉ K`, by vertex id.
    pub vertices: Vec<(usize, Rational)>,
    pub kappa: Rational,
}

impl CurvatureReport {
    pub fn new(g: &Graph, k: &[usize]) -> Result<CurvatureReport> {
        if g.faces().is_none() {
            return Err(Error::NotTessellation);
        }
        let mask = Mask::new(g, k)?;
        let vertices: Vec<(usize, Rational)> = (0..g.vertex_count())
            .filter(|&v| g.is_interior(v) && !mask.inside[v])
            .map(|v| vertex_curvature(g, v).map(|c| (v, c)))
            .collect::<Result<_>>()?;
        let kappa = vertices
            .iter()
            .map(|(_, c)| *c)
            .max()
            .ok_or(Error::EmptyDomain("no interior vertex outside K"))?;
        Ok(CurvatureReport { domain: mask.members, vertices, kappa })
    }

    pub fn kappa_f64(&self) -> f64 {
        to_f64(&self.kappa)
    }
}
