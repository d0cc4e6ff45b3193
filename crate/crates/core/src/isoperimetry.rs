//! Cheeger constants outside a compact set: exact values by enumerating
//! connected subsets, certified lower bounds, and the tessellation
//! isoperimetric inequalities.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::graph::{deg_pm_with, is_connected, Graph, Mask, VertexSet};
use crate::math::{clamp_nonnegative, Rational};
use crate::{Error, Result};

/// How a lower bound was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerMethod {
    /// Every connected subset of the (finite, fully interior) domain was
    /// examined, so the minimum is the exact constant.
    Exhaustive,
    /// Shell-degree bound `min (deg₊ − deg₋)/deg` outside a ball.
    ShellDegrees,
    /// Tessellation bound `1 − 6 / min deg` outside `K`.
    Tessellation,
}

/// Cheeger estimate for one exterior domain `V \ K`.
#[derive(Debug, Clone, PartialEq)]
pub struct CheegerEstimate {
    /// The excluded set `K`.
    pub domain: Vec<usize>,
    pub lower: Option<Rational>,
    pub lower_method: Option<LowerMethod>,
    /// `|∂_E W| / A(W)` of the witness.
    pub upper: Rational,
    pub witness: VertexSet,
    /// Largest subset size that was enumerated.
    pub max_size: usize,
    /// Whether every connected subset of the domain was enumerated.
    pub exhaustive: bool,
}

/// Best candidate found by a search from one root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub boundary: u64,
    pub area: u64,
    pub members: Vec<usize>,
}

impl Candidate {
    /// Smaller ratio first, then fewer vertices, then lexicographic order.
    pub fn better_than(&self, other: &Candidate) -> bool {
        self.order(other) == Ordering::Less
    }

    fn order(&self, other: &Candidate) -> Ordering {
        let lhs = self.boundary as u128 * other.area as u128;
        let rhs = other.boundary as u128 * self.area as u128;
        lhs.cmp(&rhs)
            .then(self.members.len().cmp(&other.members.len()))
            .then_with(|| self.members.cmp(&other.members))
    }
}

/// Keeps the better of two optional candidates.
pub fn merge_candidates(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if b.better_than(&a) { b } else { a }),
        (a, b) => a.or(b),
    }
}

/// Enumeration of connected subsets of `interior(V \ K)` up to a size cap.
///
/// Each connected set is produced exactly once from its smallest vertex
/// (extension-set search), so the roots can be searched independently and
/// their results merged with [`merge_candidates`].
pub struct CheegerSearch<'g> {
    graph: &'g Graph,
    excluded: Vec<usize>,
    allowed: Vec<bool>,
    roots: Vec<usize>,
    max_size: usize,
}

impl<'g> CheegerSearch<'g> {
    pub fn new(g: &'g Graph, k: &[usize], max_size: usize) -> Result<CheegerSearch<'g>> {
        let mask = Mask::new(g, k)?;
        let allowed: Vec<bool> = (0..g.vertex_count()).map(|v| g.is_interior(v) && !mask.inside[v]).collect();
        let roots: Vec<usize> = (0..g.vertex_count()).filter(|&v| allowed[v]).collect();
        if roots.is_empty() {
            return Err(Error::EmptyDomain("no interior vertex outside K"));
        }
        if max_size == 0 {
            return Err(Error::InvalidParameter("max_size must be at least 1".into()));
        }
        Ok(CheegerSearch { graph: g, excluded: mask.members, allowed, roots, max_size })
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    /// Whether the cap covers the whole domain.
    pub fn exhaustive(&self) -> bool {
        self.max_size >= self.roots.len()
    }

    /// Best connected set whose smallest vertex is `root`.
    pub fn search_root(&self, root: usize) -> Option<Candidate> {
        if !self.allowed.get(root).copied().unwrap_or(false) {
            return None;
        }
        let g = self.graph;
        let mut state = SearchState {
            touch: vec![0u32; g.vertex_count()],
            in_set: vec![false; g.vertex_count()],
            members: Vec::with_capacity(self.max_size),
            best: None,
        };
        state.push(g, root);
        let ext: Vec<usize> = g.neighbors(root).filter(|&u| u > root && self.allowed[u]).collect();
        let deg = g.deg(root) as u64;
        self.extend(&mut state, ext, root, deg, deg);
        state.best
    }

    fn extend(&self, s: &mut SearchState, mut ext: Vec<usize>, root: usize, boundary: u64, area: u64) {
        s.offer(boundary, area);
        if s.members.len() == self.max_size {
            return;
        }
        let g = self.graph;
        while let Some(w) = ext.pop() {
            // exclusive neighbours of w: not in W and not adjacent to W
            let mut next = ext.clone();
            next.extend(g.neighbors(w).filter(|&u| u > root && self.allowed[u] && s.touch[u] == 0 && !s.in_set[u]));
            let inside = s.touch[w] as u64;
            let deg = g.deg(w) as u64;
            s.push(g, w);
            self.extend(s, next, root, boundary + deg - 2 * inside, area + deg);
            s.pop(g, w);
        }
    }

    /// Combine per-root results into the estimate.
    pub fn finish(&self, best: Option<Candidate>) -> Result<CheegerEstimate> {
        let best = best.ok_or(Error::EmptyDomain("no interior vertex outside K"))?;
        let witness = VertexSet::new(self.graph, &best.members)?;
        let upper = Rational::new(best.boundary as i128, best.area as i128);
        debug_assert_eq!(witness.cheeger_ratio(), Some(upper));
        let exact = self.exhaustive() && self.graph.is_complete_host();
        Ok(CheegerEstimate {
            domain: self.excluded.clone(),
            lower: exact.then_some(upper),
            lower_method: exact.then_some(LowerMethod::Exhaustive),
            upper,
            witness,
            max_size: self.max_size,
            exhaustive: self.exhaustive(),
        })
    }
}

struct SearchState {
    /// Number of members of W adjacent to each vertex.
    touch: Vec<u32>,
    in_set: Vec<bool>,
    members: Vec<usize>,
    best: Option<Candidate>,
}

impl SearchState {
    fn push(&mut self, g: &Graph, v: usize) {
        self.in_set[v] = true;
        self.members.push(v);
        for u in g.neighbors(v) {
            self.touch[u] += 1;
        }
    }

    fn pop(&mut self, g: &Graph, v: usize) {
        self.in_set[v] = false;
        self.members.pop();
        for u in g.neighbors(v) {
            self.touch[u] -= 1;
        }
    }

    fn offer(&mut self, boundary: u64, area: u64) {
        if let Some(best) = &self.best {
            let lhs = boundary as u128 * best.area as u128;
            let rhs = best.boundary as u128 * area as u128;
            match lhs.cmp(&rhs) {
                Ordering::Greater => return,
                Ordering::Equal if self.members.len() > best.members.len() => return,
                _ => {}
            }
        }
        let mut members = self.members.clone();
        members.sort_unstable();
        let candidate = Candidate { boundary, area, members };
        if self.best.as_ref().is_none_or(|b| candidate.better_than(b)) {
            self.best = Some(candidate);
        }
    }
}

/// `min |∂_E W| / A(W)` over connected interior `W ⊆ V \ K` with
/// `|W| ≤ max_size`. The witness ratio is always an upper bound for the
/// Cheeger constant outside `K`; it is exact (and reported as a certified
/// lower bound too) when the search covered the whole domain of a graph
/// without truncation boundary.
pub fn cheeger_exact(g: &Graph, k: &[usize], max_size: usize) -> Result<CheegerEstimate> {
    let search = CheegerSearch::new(g, k, max_size)?;
    let best = search
        .roots()
        .iter()
        .fold(None, |acc, &r| merge_candidates(acc, search.search_root(r)));
    search.finish(best)
}

/// Shell-degree lower bound outside the ball `B_n` (labels `≤ n`).
#[derive(Debug, Clone, PartialEq)]
pub struct ShellDegreeBound {
    /// `max(0, min (deg₊(v) − deg₋(v)) / deg(v))` over interior `v ∉ B_n`.
    pub value: Rational,
    /// A vertex attaining the minimum (before clamping).
    pub argmin: usize,
    /// False when `V \ B_n` contains truncation-boundary vertices, whose
    /// infinite-graph degrees are unknown: the bound then only covers the
    /// generations present in the host.
    pub certified: bool,
}

/// `C = min_{v ∉ B_n} (deg₊(v) − deg₋(v)) / deg(v)`, clamped at 0.
pub fn cheeger_lower_dka(g: &Graph, n: u32) -> Result<ShellDegreeBound> {
    let labels = g.generation().ok_or(Error::MissingGenerations)?;
    let mut best: Option<(Rational, usize)> = None;
    let mut certified = true;
    for v in (0..g.vertex_count()).filter(|&v| labels[v] > n) {
        if !g.is_interior(v) {
            certified = false;
            continue;
        }
        let (back, forward) = deg_pm_with(g, labels, v);
        let ratio = Rational::new(forward as i128 - back as i128, g.deg(v) as i128);
        if best.as_ref().is_none_or(|(b, _)| ratio < *b) {
            best = Some((ratio, v));
        }
    }
    let (value, argmin) = best.ok_or(Error::EmptyDomain("no interior vertex outside the ball"))?;
    Ok(ShellDegreeBound { value: clamp_nonnegative(value), argmin, certified })
}

/// `max(0, 1 − 6 / min_{interior v ∉ K} deg(v))` on a tessellation patch.
pub fn cheeger_lower_tessellation(g: &Graph, k: &[usize]) -> Result<Rational> {
    if g.faces().is_none() {
        return Err(Error::NotTessellation);
    }
    let mask = Mask::new(g, k)?;
    let min_degree = (0..g.vertex_count())
        .filter(|&v| g.is_interior(v) && !mask.inside[v])
        .map(|v| g.deg(v))
        .min()
        .ok_or(Error::EmptyDomain("no interior vertex outside K"))?;
    Ok(clamp_nonnegative(Rational::from_integer(1) - Rational::new(6, min_degree as i128)))
}

/// Outcome of `|∂_E W| ≥ A(W) − 6(|W| + C(W) − 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IsoperimetricCheck {
    pub holds: bool,
    pub lhs: i64,
    pub rhs: i64,
    pub slack: i64,
}

fn interior_connected_set(g: &Graph, w: &[usize]) -> Result<VertexSet> {
    if g.faces().is_none() {
        return Err(Error::NotTessellation);
    }
    let set = VertexSet::new(g, w)?;
    if set.is_empty() {
        return Err(Error::EmptyDomain("empty vertex set"));
    }
    if let Some(&v) = set.members().iter().find(|&&v| !g.is_interior(v)) {
        return Err(Error::NotInterior(v));
    }
    if !is_connected(g, set.members())? {
        return Err(Error::Disconnected);
    }
    Ok(set)
}

/// Tessellation isoperimetric inequality for a connected interior `W`.
pub fn isoperimetric_check(g: &Graph, w: &[usize]) -> Result<IsoperimetricCheck> {
    let set = interior_connected_set(g, w)?;
    let lhs = set.boundary_edges() as i64;
    let rhs = set.area() as i64 - 6 * (set.len() as i64 + set.complement_components() as i64 - 2);
    Ok(IsoperimetricCheck { holds: lhs >= rhs, lhs, rhs, slack: lhs - rhs })
}

/// Outcome of the face-sum identity
/// `Σ_{v∈W} Σ_{f∋v} 1/deg(f) = |F_W| − C(W) + Σ_{f∈∂_F W} deg_W(f)/deg(f)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceSumCheck {
    pub holds: bool,
    pub lhs: Rational,
    pub rhs: Rational,
    /// `|F_W| = 2 − |W| + |E_W|`, unbounded face included.
    pub faces_of_w: i64,
    /// `|∂_F W|`: faces containing an edge of `∂_E W`.
    pub boundary_faces: usize,
    pub boundary_edges: u64,
    /// Faces of the induced subgraph that are not faces of the host, the
    /// unbounded one included: `|F_W|` minus the faces with every vertex
    /// in `W`.
    pub holes: i64,
    /// `C(W)`.
    pub complement_components: usize,
}

impl FaceSumCheck {
    /// Each boundary face contains at least two boundary edges.
    pub fn boundary_faces_bounded(&self) -> bool {
        self.boundary_faces as u64 <= self.boundary_edges
    }

    /// Two components of `V \ W` open into the same face of the induced
    /// subgraph (possible across a face diagonal when `p ≥ 4`). Then
    /// `C(W)` exceeds the number of holes and the identity is off by
    /// exactly the difference.
    pub fn pinched(&self) -> bool {
        (self.complement_components as i64) > self.holes
    }

    /// The identity with the number of holes in place of `C(W)`; holds for
    /// every connected interior `W`.
    pub fn holds_with_holes(&self) -> bool {
        self.lhs == self.rhs + Rational::from_integer(self.complement_components as i128 - self.holes as i128)
    }
}

/// Face-sum identity for a connected interior `W`, in exact arithmetic.
pub fn face_sum_check(g: &Graph, w: &[usize]) -> Result<FaceSumCheck> {
    let set = interior_connected_set(g, w)?;
    let faces = g.faces().unwrap();
    let mut lhs = Rational::from_integer(0);
    for &v in set.members() {
        for &f in g.faces_at(v).unwrap() {
            lhs += Rational::new(1, faces[f as usize].len() as i128);
        }
    }
    let faces_of_w = 2 - set.len() as i64 + set.internal_edges() as i64;
    let mut rhs = Rational::from_integer(faces_of_w as i128 - set.complement_components() as i128);
    let mut touched: Vec<u32> = set.members().iter().flat_map(|&v| g.faces_at(v).unwrap().iter().copied()).collect();
    touched.sort_unstable();
    touched.dedup();
    let mut boundary_faces = 0;
    let mut enclosed = 0i64;
    for f in touched {
        let face = &faces[f as usize];
        let inside = face.iter().filter(|&&v| set.contains(v)).count();
        if inside < face.len() {
            boundary_faces += 1;
            rhs += Rational::new(inside as i128, face.len() as i128);
        } else {
            enclosed += 1;
        }
    }
    Ok(FaceSumCheck {
        holds: lhs == rhs,
        lhs,
        rhs,
        faces_of_w,
        boundary_faces,
        boundary_edges: set.boundary_edges(),
        holes: faces_of_w - enclosed,
        complement_components: set.complement_components(),
    })
}
