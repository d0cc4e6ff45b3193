//! The Laplacians `Δ`, `Δ̃`, `Δ̂` and their Dirichlet restrictions.
//!
//! A restriction to a vertex set `S` keeps the rows and columns of `S` and
//! the *host* degrees on the diagonal. Every variant has the shape
//!
//! ```text
//! M[i][j] = diag_i·δ_ij − left_i · A_ij · right_j
//! ```
//!
//! with `(diag, left, right) = (deg, 1, 1)` for `Δ`, `(1, deg^{-1/2},
//! deg^{-1/2})` for `Δ̂` and `(1, 1/deg, 1)` for `Δ̃`, which lets one
//! matrix-free kernel serve all three. Complete blocks of the host are
//! applied through their block sums, so a product costs `O(|S| + |E_S|)`
//! with the block edges never expanded.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::graph::{levels, Graph, Mask};
use crate::math::{abs, sqrt};
use crate::{Error, Result};

/// Which Laplacian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `Δ = D − A` on `l²(V)`.
    Delta,
    /// `Δ̃ = I − D⁻¹A` on `l²(V, deg)`.
    DeltaTilde,
    /// `Δ̂ = I − D^{-1/2} A D^{-1/2}` on `l²(V)`.
    DeltaHat,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Delta, Variant::DeltaTilde, Variant::DeltaHat];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Delta => "delta",
            Variant::DeltaTilde => "delta_tilde",
            Variant::DeltaHat => "delta_hat",
        }
    }

    pub fn weight(self) -> Weight {
        match self {
            Variant::DeltaTilde => Weight::Degree,
            _ => Weight::Unit,
        }
    }
}

/// Inner product `⟨φ,ψ⟩_g = Σ g(v) φ(v) ψ(v)` with `g = 1` or `g = deg`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Weight {
    Unit,
    Degree,
}

/// A function on the retained vertices of a restriction, in their order.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionVector {
    pub values: Vec<f64>,
    pub weight: Weight,
}

impl FunctionVector {
    pub fn new(values: Vec<f64>, weight: Weight) -> Result<FunctionVector> {
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("function values must be finite".into()));
        }
        Ok(FunctionVector { values, weight })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `⟨φ,φ⟩_g` for the given degrees.
    pub fn norm_sq(&self, degrees: &[u64]) -> f64 {
        match self.weight {
            Weight::Unit => self.values.iter().map(|x| x * x).sum(),
            Weight::Degree => self.values.iter().zip(degrees).map(|(x, &d)| d as f64 * x * x).sum(),
        }
    }
}

/// Dirichlet restriction of one Laplacian variant to a vertex set.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix {
    variant: Variant,
    vertices: Vec<usize>,
    degrees: Vec<u64>,
    diag: Vec<f64>,
    left: Vec<f64>,
    right: Vec<f64>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    block_of: Vec<u32>,
    blocks: Vec<Range<u32>>,
}

const NO_BLOCK: u32 = u32::MAX;

impl LaplacianMatrix {
    /// Restriction to the vertex set `keep` (any order; duplicates ignored).
    /// All retained vertices must be interior so that their degrees are the
    /// infinite-graph degrees.
    pub fn restrict(g: &Graph, variant: Variant, keep: &[usize]) -> Result<LaplacianMatrix> {
        let mask = Mask::new(g, keep)?;
        if mask.members.is_empty() {
            return Err(Error::EmptyDomain("restriction keeps no vertex"));
        }
        if let Some(&v) = mask.members.iter().find(|&&v| !g.is_interior(v)) {
            return Err(Error::NotInterior(v));
        }
        let vertices = mask.members;
        let n = vertices.len();
        let mut local = vec![u32::MAX; g.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i as u32;
        }
        let degrees: Vec<u64> = vertices.iter().map(|&v| g.deg(v) as u64).collect();
        if let Some(i) = degrees.iter().position(|&d| d == 0) {
            if variant != Variant::Delta {
                return Err(Error::InvalidGraph(alloc::format!(
                    "vertex {} has degree 0, the normalised operators are undefined",
                    vertices[i]
                )));
            }
        }

        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for &v in &vertices {
            targets.extend(
                g.explicit_neighbors(v)
                    .iter()
                    .map(|&u| local[u as usize])
                    .filter(|&j| j != u32::MAX),
            );
            offsets.push(targets.len());
        }

        // a host block meets the sorted vertex list in a contiguous run
        let mut block_of = vec![NO_BLOCK; n];
        let mut blocks: Vec<Range<u32>> = Vec::new();
        let mut i = 0;
        while i < n {
            let Some(host) = g.block_of(vertices[i]) else {
                i += 1;
                continue;
            };
            let start = i;
            while i < n && host.contains(&vertices[i]) {
                i += 1;
            }
            if i - start >= 2 {
                let id = blocks.len() as u32;
                block_of[start..i].iter_mut().for_each(|b| *b = id);
                blocks.push(start as u32..i as u32);
            }
        }

        let (diag, left, right): (Vec<f64>, Vec<f64>, Vec<f64>) = match variant {
            Variant::Delta => (degrees.iter().map(|&d| d as f64).collect(), vec![1.0; n], vec![1.0; n]),
            Variant::DeltaHat => {
                let s: Vec<f64> = degrees.iter().map(|&d| 1.0 / sqrt(d as f64)).collect();
                (vec![1.0; n], s.clone(), s)
            }
            Variant::DeltaTilde => (
                vec![1.0; n],
                degrees.iter().map(|&d| 1.0 / d as f64).collect(),
                vec![1.0; n],
            ),
        };

        Ok(LaplacianMatrix { variant, vertices, degrees, diag, left, right, offsets, targets, block_of, blocks })
    }

    pub fn dimension(&self) -> usize {
        self.vertices.len()
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn weight(&self) -> Weight {
        self.variant.weight()
    }

    /// Host ids of the retained vertices, ascending (row order).
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Host degrees of the retained vertices.
    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// The inner-product weights `g(v)` in row order.
    pub fn weights(&self) -> Vec<f64> {
        match self.weight() {
            Weight::Unit => vec![1.0; self.dimension()],
            Weight::Degree => self.degrees.iter().map(|&d| d as f64).collect(),
        }
    }

    /// Whether `i` and `j` (row indices) are adjacent in the host.
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        if i == j {
            return false;
        }
        if self.block_of[i] != NO_BLOCK && self.block_of[i] == self.block_of[j] {
            return true;
        }
        self.targets[self.offsets[i]..self.offsets[i + 1]].contains(&(j as u32))
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.diag[i]
        } else if self.adjacent(i, j) {
            -self.left[i] * self.right[j]
        } else {
            0.0
        }
    }

    /// Row-wise sorted nonzero off-diagonal columns of row `i`.
    fn row_columns(&self, i: usize) -> Vec<usize> {
        let mut cols: Vec<usize> = self.targets[self.offsets[i]..self.offsets[i + 1]].iter().map(|&j| j as usize).collect();
        if let Some(b) = self.block(i) {
            cols.extend(b.filter(|&j| j != i));
        }
        cols.sort_unstable();
        cols
    }

    fn block(&self, i: usize) -> Option<Range<usize>> {
        match self.block_of[i] {
            NO_BLOCK => None,
            b => {
                let r = &self.blocks[b as usize];
                Some(r.start as usize..r.end as usize)
            }
        }
    }

    /// Nonzero entries `(row, col, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dimension()).flat_map(move |i| {
            let mut row = vec![(i, i, self.diag[i])];
            row.extend(self.row_columns(i).into_iter().map(|j| (i, j, -self.left[i] * self.right[j])));
            row.sort_by_key(|e| e.1);
            row.into_iter()
        })
    }

    /// `y = M x`.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.dimension()];
        self.apply_into(x, &mut y)?;
        Ok(y)
    }

    /// `y = M x` into a caller-provided buffer.
    pub fn apply_into(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        let n = self.dimension();
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: x.len() });
        }
        if y.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: y.len() });
        }
        let sums: Vec<f64> = self
            .blocks
            .iter()
            .map(|r| (r.start as usize..r.end as usize).map(|j| self.right[j] * x[j]).sum())
            .collect();
        for i in 0..n {
            let mut acc: f64 = self.targets[self.offsets[i]..self.offsets[i + 1]]
                .iter()
                .map(|&j| self.right[j as usize] * x[j as usize])
                .sum();
            if self.block_of[i] != NO_BLOCK {
                acc += sums[self.block_of[i] as usize] - self.right[i] * x[i];
            }
            y[i] = self.diag[i] * x[i] - self.left[i] * acc;
        }
        Ok(())
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dimension();
        let mut m = vec![0.0; n * n];
        for (i, j, v) in self.entries() {
            m[i * n + j] = v;
        }
        m
    }

    /// `‖M‖_∞`, the largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.dimension())
            .map(|i| {
                let off: f64 = self.row_columns(i).iter().map(|&j| abs(self.left[i] * self.right[j])).sum();
                abs(self.diag[i]) + off
            })
            .fold(0.0, f64::max)
    }

    /// A symmetric matrix with the same spectrum: `Δ̂` for `Δ̃` (through the
    /// similarity `D^{1/2} Δ̃ D^{-1/2}`), the matrix itself otherwise.
    pub fn symmetric_form(&self) -> LaplacianMatrix {
        match self.variant {
            Variant::DeltaTilde => {
                let s: Vec<f64> = self.degrees.iter().map(|&d| 1.0 / sqrt(d as f64)).collect();
                LaplacianMatrix {
                    variant: Variant::DeltaHat,
                    left: s.clone(),
                    right: s,
                    ..self.clone()
                }
            }
            _ => self.clone(),
        }
    }

    /// `D^{1/2} M D^{-1/2}` computed entrywise from this matrix's entries,
    /// dense row-major. For `Δ̃` this is the symmetric `Δ̂`.
    pub fn similarity_dense(&self) -> Vec<f64> {
        let n = self.dimension();
        let mut m = self.to_dense();
        for i in 0..n {
            for j in 0..n {
                m[i * n + j] *= sqrt(self.degrees[i] as f64) / sqrt(self.degrees[j] as f64);
            }
        }
        m
    }

    /// Exact `⟨M χ_W, χ_W⟩` for `Δ`, computed from the matrix structure:
    /// `Σ_{i∈W} (deg(i) − |{j ∈ W : j ∼ i}|)`. `members` are row indices.
    pub fn delta_indicator_form(&self, members: &[usize]) -> Result<i128> {
        let n = self.dimension();
        let mut inside = vec![false; n];
        for &i in members {
            if i >= n {
                return Err(Error::InvalidVertex(i));
            }
            inside[i] = true;
        }
        let mut per_block = vec![0i128; self.blocks.len()];
        for i in (0..n).filter(|&i| inside[i]) {
            if self.block_of[i] != NO_BLOCK {
                per_block[self.block_of[i] as usize] += 1;
            }
        }
        let mut form = 0i128;
        for i in (0..n).filter(|&i| inside[i]) {
            let mut within = self.targets[self.offsets[i]..self.offsets[i + 1]]
                .iter()
                .filter(|&&j| inside[j as usize])
                .count() as i128;
            if self.block_of[i] != NO_BLOCK {
                within += per_block[self.block_of[i] as usize] - 1;
            }
            form += self.degrees[i] as i128 - within;
        }
        Ok(form)
    }

    /// Row index of host vertex `v`, if retained.
    pub fn index_of(&self, v: usize) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }
}

/// Restriction of `variant` to `V \ K`.
pub fn assemble(g: &Graph, variant: Variant, k: &[usize]) -> Result<LaplacianMatrix> {
    let mask = Mask::new(g, k)?;
    let keep: Vec<usize> = (0..g.vertex_count()).filter(|&v| !mask.inside[v]).collect();
    if keep.is_empty() {
        return Err(Error::EmptyDomain("complement of K is empty"));
    }
    LaplacianMatrix::restrict(g, variant, &keep)
}

/// Vertices of the annulus `B_R \ B_k`: levels in `(k, R]`.
pub fn annulus_vertices(g: &Graph, inner: u32, outer: u32) -> Result<Vec<usize>> {
    if inner >= outer {
        return Err(Error::InvalidParameter(alloc::format!(
            "annulus needs inner radius {inner} < outer radius {outer}"
        )));
    }
    let levels = levels(g);
    let members: Vec<usize> = (0..g.vertex_count()).filter(|&v| levels[v] > inner && levels[v] <= outer).collect();
    if members.is_empty() {
        return Err(Error::EmptyDomain("annulus is empty"));
    }
    Ok(members)
}

/// Dirichlet restriction to `B_R \ B_k`, zero boundary values on both sides.
pub fn dirichlet_annulus(g: &Graph, inner: u32, outer: u32, variant: Variant) -> Result<LaplacianMatrix> {
    LaplacianMatrix::restrict(g, variant, &annulus_vertices(g, inner, outer)?)
}

/// `⟨dφ, dφ⟩ = ½ Σ_v Σ_{u∼v} |φ(u) − φ(v)|²` for `φ` indexed by host
/// vertices and supported on interior vertices.
pub fn quadratic_form(g: &Graph, phi: &[f64]) -> Result<f64> {
    let n = g.vertex_count();
    if phi.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: phi.len() });
    }
    if let Some(v) = (0..n).find(|&v| phi[v] != 0.0 && !g.is_interior(v)) {
        return Err(Error::NotInterior(v));
    }
    let mut total = 0.0;
    for v in 0..n {
        for &u in g.explicit_neighbors(v) {
            let u = u as usize;
            if u > v {
                let d = phi[u] - phi[v];
                total += d * d;
            }
        }
    }
    // within a block of size k: Σ_{i<j} (x_i − x_j)² = k Σx² − (Σx)²
    for block in g.blocks() {
        let k = block.len() as f64;
        let mean = block.clone().map(|v| phi[v]).sum::<f64>() / k;
        let spread: f64 = block.map(|v| (phi[v] - mean) * (phi[v] - mean)).sum();
        total += k * spread;
    }
    Ok(total)
}

/// `⟨Mφ,φ⟩_g / ⟨φ,φ⟩_g` using the matrix's weight.
pub fn rayleigh(m: &LaplacianMatrix, phi: &FunctionVector) -> Result<f64> {
    if phi.len() != m.dimension() {
        return Err(Error::DimensionMismatch { expected: m.dimension(), got: phi.len() });
    }
    let weighted = FunctionVector { values: phi.values.clone(), weight: m.weight() };
    let denom = weighted.norm_sq(m.degrees());
    if denom == 0.0 {
        return Err(Error::ZeroVector);
    }
    let y = m.apply(&phi.values)?;
    let numer: f64 = match m.weight() {
        Weight::Unit => y.iter().zip(&phi.values).map(|(a, b)| a * b).sum(),
        Weight::Degree => y
            .iter()
            .zip(&phi.values)
            .zip(m.degrees())
            .map(|((a, b), &d)| d as f64 * a * b)
            .sum(),
    };
    Ok(numer / denom)
}

/// Outcome of the factorisation
/// `⟨Δ_Kφ,φ⟩/⟨φ,φ⟩ = R(Δ̂_K, D^{1/2}φ) · ⟨D_Kφ,φ⟩/⟨φ,φ⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorizationCheck {
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub relative_error: f64,
}

/// Relative tolerance of [`factorization_check`].
pub const FACTORIZATION_TOLERANCE: f64 = 1e-12;

/// Checks the factorisation for `φ` on `V \ K` (row order of the
/// restriction), evaluating both sides independently.
pub fn factorization_check(g: &Graph, k: &[usize], phi: &[f64]) -> Result<FactorizationCheck> {
    let delta = assemble(g, Variant::Delta, k)?;
    let hat = assemble(g, Variant::DeltaHat, k)?;
    let unit = FunctionVector::new(phi.to_vec(), Weight::Unit)?;
    let lhs = rayleigh(&delta, &unit)?;
    let scaled: Vec<f64> = phi.iter().zip(hat.degrees()).map(|(x, &d)| x * sqrt(d as f64)).collect();
    let hat_quotient = rayleigh(&hat, &FunctionVector::new(scaled, Weight::Unit)?)?;
    let plain: f64 = phi.iter().map(|x| x * x).sum();
    let degree_weighted: f64 = phi.iter().zip(delta.degrees()).map(|(x, &d)| d as f64 * x * x).sum();
    let rhs = hat_quotient * degree_weighted / plain;
    let relative_error = abs(lhs - rhs) / abs(lhs).max(abs(rhs)).max(f64::MIN_POSITIVE);
    let holds = abs(lhs - rhs) <= FACTORIZATION_TOLERANCE * abs(lhs).max(abs(rhs)).max(1.0);
    Ok(FactorizationCheck { holds, lhs, rhs, relative_error })
}

/// Exact `(⟨Δ_K χ_W, χ_W⟩, ⟨χ_W, χ_W⟩_deg)` for `W ⊆ V \ K`, from the
/// assembled restriction.
pub fn indicator_forms(g: &Graph, k: &[usize], w: &[usize]) -> Result<(i128, i128)> {
    let m = assemble(g, Variant::Delta, k)?;
    let rows: Vec<usize> = w
        .iter()
        .map(|&v| m.index_of(v).ok_or(Error::InvalidParameter(alloc::format!("vertex {v} lies in K"))))
        .collect::<Result<_>>()?;
    let mut unique = rows.clone();
    unique.sort_unstable();
    unique.dedup();
    let form = m.delta_indicator_form(&unique)?;
    let norm: i128 = unique.iter().map(|&i| m.degrees()[i] as i128).sum();
    Ok((form, norm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{branching_graph, complete_graph, BranchingParams};
    use crate::graph::GraphBuilder;
    use num_rational::Ratio;

    fn path3() -> Graph {
        let mut b = GraphBuilder::new(3);
        b.add_edge(0, 1).add_edge(1, 2);
        b.build().unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-14
    }

    #[test]
    fn path_restrictions_by_hand() {
        let d = assemble(&path3(), Variant::Delta, &[0]).unwrap();
        assert_eq!(d.to_dense(), [2.0, -1.0, -1.0, 1.0]);
        let h = assemble(&path3(), Variant::DeltaHat, &[0]).unwrap();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let m = h.to_dense();
        assert!(close(m[0], 1.0) && close(m[1], -s) && close(m[2], -s) && close(m[3], 1.0));
        let t = assemble(&path3(), Variant::DeltaTilde, &[0]).unwrap();
        assert_eq!(t.to_dense(), [1.0, -0.5, -1.0, 1.0]);
        assert_eq!(t.weights(), [2.0, 1.0]);
    }

    #[test]
    fn rayleigh_by_hand() {
        let d = assemble(&path3(), Variant::Delta, &[0]).unwrap();
        let phi = FunctionVector::new(alloc::vec![1.0, 1.0], Weight::Unit).unwrap();
        assert!(close(rayleigh(&d, &phi).unwrap(), 0.5));
        let zero = FunctionVector::new(alloc::vec![0.0, 0.0], Weight::Unit).unwrap();
        assert_eq!(rayleigh(&d, &zero), Err(Error::ZeroVector));
    }

    #[test]
    fn block_apply_matches_dense() {
        let p = BranchingParams::new(Ratio::new(1, 1), Ratio::new(1, 1), 4).unwrap();
        let g = branching_graph(&p).unwrap();
        for variant in Variant::ALL {
            let m = dirichlet_annulus(&g, 1, 3, variant).unwrap();
            let n = m.dimension();
            let x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin() + 0.1).collect();
            let dense = m.to_dense();
            let y = m.apply(&x).unwrap();
            for i in 0..n {
                let expect: f64 = (0..n).map(|j| dense[i * n + j] * x[j]).sum();
                assert!((y[i] - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn annulus_of_first_clique() {
        let p = BranchingParams::new(Ratio::new(1, 1), Ratio::new(1, 1), 4).unwrap();
        let g = branching_graph(&p).unwrap();
        let m = dirichlet_annulus(&g, 1, 2, Variant::Delta).unwrap();
        // generation 2 of G_{1,1} is K_2 with host degree 1 + 1 + [2] = 5
        assert_eq!(m.to_dense(), [5.0, -1.0, -1.0, 5.0]);
        assert!(matches!(dirichlet_annulus(&g, 1, 4, Variant::Delta), Err(Error::NotInterior(_))));
        assert!(dirichlet_annulus(&g, 2, 2, Variant::Delta).is_err());
    }

    #[test]
    fn quadratic_form_values() {
        let k5 = complete_graph(5).unwrap();
        assert!(close(quadratic_form(&k5, &[2.0; 5]).unwrap(), 0.0));
        let mut b = GraphBuilder::new(2);
        b.add_edge(0, 1);
        assert!(close(quadratic_form(&b.build().unwrap(), &[1.0, 0.0]).unwrap(), 1.0));
        let q = quadratic_form(&k5, &[1.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(close(q, 6.0));
    }

    #[test]
    fn indicator_identity_on_a_block_graph() {
        let k5 = complete_graph(5).unwrap();
        assert_eq!(indicator_forms(&k5, &[0], &[1, 2]).unwrap(), (6, 8));
    }

    #[test]
    fn factorisation_on_path() {
        let c = factorization_check(&path3(), &[0], &[0.3, -1.2]).unwrap();
        assert!(c.holds, "{c:?}");
    }
}
