//! Finite simple graphs standing in for truncations of infinite graphs.
//!
//! Adjacency is stored as sorted explicit neighbour lists plus optional
//! *complete blocks*: contiguous vertex ranges in which every pair is
//! adjacent. Blocks keep the generations of the rapidly branching family
//! (complete graphs with millions of vertices) representable; every query
//! below treats a block exactly like its materialised edge set.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use crate::math::Rational;
use crate::{Error, Result};

const NO_BLOCK: u32 = u32::MAX;

/// Marker for vertices out of reach in [`bfs_distances`].
pub const UNREACHED: u32 = u32::MAX;

/// Which part of a graph description violated an invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphItem {
    Vertex,
    Edge,
    Block,
    Face,
    Generation,
    Interior,
}

impl fmt::Display for GraphItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphItem::Vertex => "vertex",
            GraphItem::Edge => "edge",
            GraphItem::Block => "complete block",
            GraphItem::Face => "face",
            GraphItem::Generation => "generation label",
            GraphItem::Interior => "interior flag",
        })
    }
}

/// A located invariant violation, reported by [`GraphBuilder::build`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub item: GraphItem,
    pub index: usize,
    pub reason: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.item, self.index, self.reason)
    }
}

fn violation(item: GraphItem, index: usize, reason: impl Into<String>) -> Error {
    Error::Violation(Violation { item, index, reason: reason.into() })
}

/// Immutable simple graph with optional faces, generation labels and
/// interior flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    block_of: Vec<u32>,
    blocks: Vec<Range<u32>>,
    faces: Option<Vec<Vec<usize>>>,
    face_offsets: Vec<usize>,
    face_ids: Vec<u32>,
    generation: Option<Vec<u32>>,
    interior: Vec<bool>,
}

/// Incremental construction of a [`Graph`]; all invariants are checked in
/// [`GraphBuilder::build`].
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    n: usize,
    edges: Vec<(u32, u32)>,
    blocks: Vec<Range<usize>>,
    faces: Option<Vec<Vec<usize>>>,
    generation: Option<Vec<u32>>,
    interior: Option<Vec<bool>>,
    bad_vertex: Option<(usize, usize)>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        GraphBuilder { n, ..Default::default() }
    }

    pub fn with_edge_capacity(mut self, edges: usize) -> Self {
        self.edges.reserve(edges);
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Adds the undirected edge `u–v`. Edges are indexed in insertion order
    /// for error reporting.
    pub fn add_edge(&mut self, u: usize, v: usize) -> &mut Self {
        if (u >= self.n || v >= self.n || u > u32::MAX as usize || v > u32::MAX as usize)
            && self.bad_vertex.is_none()
        {
            self.bad_vertex = Some((self.edges.len(), u.max(v)));
        }
        self.edges.push((u as u32, v as u32));
        self
    }

    /// Declares `range` to be a complete subgraph.
    pub fn add_complete_block(&mut self, range: Range<usize>) -> &mut Self {
        self.blocks.push(range);
        self
    }

    pub fn faces(&mut self, faces: Vec<Vec<usize>>) -> &mut Self {
        self.faces = Some(faces);
        self
    }

    pub fn generation(&mut self, labels: Vec<u32>) -> &mut Self {
        self.generation = Some(labels);
        self
    }

    pub fn interior(&mut self, flags: Vec<bool>) -> &mut Self {
        self.interior = Some(flags);
        self
    }

    pub fn build(self) -> Result<Graph> {
        let n = self.n;
        if n == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".to_string()));
        }
        if n >= u32::MAX as usize {
            return Err(Error::TooLarge(n as u64));
        }
        if let Some((index, v)) = self.bad_vertex {
            return Err(violation(GraphItem::Edge, index, format!("vertex {v} is out of range")));
        }

        let mut block_of = vec![NO_BLOCK; n];
        let mut block_order: Vec<usize> = (0..self.blocks.len()).collect();
        block_order.sort_by_key(|&i| self.blocks[i].start);
        let mut blocks: Vec<Range<u32>> = Vec::new();
        let mut last_end = 0usize;
        for &i in &block_order {
            let r = &self.blocks[i];
            if r.start >= r.end || r.end > n {
                return Err(violation(GraphItem::Block, i, format!("range {r:?} is empty or out of range")));
            }
            if r.start < last_end {
                return Err(violation(GraphItem::Block, i, "overlaps another complete block"));
            }
            last_end = r.end;
            if r.len() < 2 {
                continue;
            }
            let id = blocks.len() as u32;
            block_of[r.clone()].iter_mut().for_each(|b| *b = id);
            blocks.push(r.start as u32..r.end as u32);
        }

        let mut keyed: Vec<(u32, u32, usize)> = Vec::with_capacity(self.edges.len());
        for (index, &(u, v)) in self.edges.iter().enumerate() {
            if u == v {
                return Err(violation(GraphItem::Edge, index, format!("loop at vertex {u}")));
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            if block_of[a as usize] != NO_BLOCK && block_of[a as usize] == block_of[b as usize] {
                return Err(violation(
                    GraphItem::Edge,
                    index,
                    format!("edge {a}-{b} repeats an edge of a complete block"),
                ));
            }
            keyed.push((a, b, index));
        }
        keyed.sort_unstable();
        for w in keyed.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                let index = w[0].2.max(w[1].2);
                return Err(violation(
                    GraphItem::Edge,
                    index,
                    format!("repeated edge {}-{}", w[1].0, w[1].1),
                ));
            }
        }

        let mut counts = vec![0usize; n + 1];
        for &(a, b, _) in &keyed {
            counts[a as usize + 1] += 1;
            counts[b as usize + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let offsets = counts;
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; offsets[n]];
        for &(a, b, _) in &keyed {
            targets[fill[a as usize]] = b;
            fill[a as usize] += 1;
            targets[fill[b as usize]] = a;
            fill[b as usize] += 1;
        }
        drop(keyed);
        for v in 0..n {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }

        let mut graph = Graph {
            offsets,
            targets,
            block_of,
            blocks,
            faces: None,
            face_offsets: Vec::new(),
            face_ids: Vec::new(),
            generation: None,
            interior: Vec::new(),
        };

        if n > 1 {
            if let Some(v) = (0..n).find(|&v| graph.deg(v) == 0) {
                return Err(violation(GraphItem::Vertex, v, "isolated vertex"));
            }
        }

        if let Some(labels) = self.generation {
            if labels.len() != n {
                return Err(violation(
                    GraphItem::Generation,
                    labels.len().min(n),
                    format!("expected {n} labels, got {}", labels.len()),
                ));
            }
            graph.generation = Some(labels);
        }
        graph.interior = match self.interior {
            Some(flags) if flags.len() != n => {
                return Err(violation(
                    GraphItem::Interior,
                    flags.len().min(n),
                    format!("expected {n} flags, got {}", flags.len()),
                ));
            }
            Some(flags) => flags,
            None => vec![true; n],
        };

        if let Some(faces) = self.faces {
            for (index, face) in faces.iter().enumerate() {
                if face.len() < 3 {
                    return Err(violation(GraphItem::Face, index, "fewer than three vertices"));
                }
                if let Some(&v) = face.iter().find(|&&v| v >= n) {
                    return Err(violation(GraphItem::Face, index, format!("vertex {v} is out of range")));
                }
                let mut sorted = face.clone();
                sorted.sort_unstable();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    return Err(violation(GraphItem::Face, index, "repeated vertex"));
                }
                for i in 0..face.len() {
                    let (u, v) = (face[i], face[(i + 1) % face.len()]);
                    if !graph.adjacent(u, v) {
                        return Err(violation(GraphItem::Face, index, format!("{u}-{v} is not an edge")));
                    }
                }
            }
            let mut counts = vec![0usize; n + 1];
            for face in &faces {
                for &v in face {
                    counts[v + 1] += 1;
                }
            }
            for i in 0..n {
                counts[i + 1] += counts[i];
            }
            let mut fill = counts.clone();
            let mut ids = vec![0u32; counts[n]];
            for (f, face) in faces.iter().enumerate() {
                for &v in face {
                    ids[fill[v]] = f as u32;
                    fill[v] += 1;
                }
            }
            graph.face_offsets = counts;
            graph.face_ids = ids;
            graph.faces = Some(faces);
        }
        Ok(graph)
    }
}

/// Sorted neighbours of one vertex: explicit list merged with its block.
#[derive(Debug, Clone)]
pub struct Neighbors<'a> {
    explicit: &'a [u32],
    pos: usize,
    block: Range<u32>,
    skip: u32,
}

impl Iterator for Neighbors<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.block.start == self.skip {
            self.block.start += 1;
        }
        let from_block = (self.block.start < self.block.end).then_some(self.block.start);
        let from_list = self.explicit.get(self.pos).copied();
        let next = match (from_list, from_block) {
            (Some(e), Some(b)) if e < b => {
                self.pos += 1;
                e
            }
            (_, Some(b)) => {
                self.block.start += 1;
                b
            }
            (Some(e), None) => {
                self.pos += 1;
                e
            }
            (None, None) => return None,
        };
        Some(next as usize)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let mut block = self.block.len();
        if self.block.contains(&self.skip) {
            block -= 1;
        }
        let left = self.explicit.len() - self.pos + block;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Neighbors<'_> {}

impl Graph {
    pub fn vertex_count(&self) -> usize {
        self.interior.len()
    }

    /// Number of edges, blocks included.
    pub fn edge_count(&self) -> u64 {
        let explicit = self.targets.len() as u64 / 2;
        let blocks: u64 = self
            .blocks
            .iter()
            .map(|b| {
                let k = b.len() as u64;
                k * (k - 1) / 2
            })
            .sum();
        explicit + blocks
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::InvalidVertex(v))
        }
    }

    /// Degree without bounds checking beyond the slice access.
    #[inline]
    pub fn deg(&self, v: usize) -> usize {
        let explicit = self.offsets[v + 1] - self.offsets[v];
        match self.block_of[v] {
            NO_BLOCK => explicit,
            b => explicit + self.blocks[b as usize].len() - 1,
        }
    }

    pub fn neighbors(&self, v: usize) -> Neighbors<'_> {
        let block = match self.block_of[v] {
            NO_BLOCK => 0..0,
            b => self.blocks[b as usize].clone(),
        };
        Neighbors {
            explicit: self.explicit_neighbors(v),
            pos: 0,
            block,
            skip: v as u32,
        }
    }

    /// Neighbours outside the vertex's complete block.
    #[inline]
    pub fn explicit_neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    /// The complete block containing `v`, if any.
    pub fn block_of(&self, v: usize) -> Option<Range<usize>> {
        match self.block_of[v] {
            NO_BLOCK => None,
            b => {
                let r = &self.blocks[b as usize];
                Some(r.start as usize..r.end as usize)
            }
        }
    }

    pub(crate) fn block_index(&self, v: usize) -> Option<usize> {
        match self.block_of[v] {
            NO_BLOCK => None,
            b => Some(b as usize),
        }
    }

    pub fn blocks(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        self.blocks.iter().map(|r| r.start as usize..r.end as usize)
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        if u == v {
            return false;
        }
        if self.block_of[u] != NO_BLOCK && self.block_of[u] == self.block_of[v] {
            return true;
        }
        self.explicit_neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// All edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v))
        })
    }

    pub fn faces(&self) -> Option<&[Vec<usize>]> {
        self.faces.as_deref()
    }

    /// Ids of the faces containing `v`.
    pub fn faces_at(&self, v: usize) -> Option<&[u32]> {
        self.faces.as_ref()?;
        Some(&self.face_ids[self.face_offsets[v]..self.face_offsets[v + 1]])
    }

    pub fn generation(&self) -> Option<&[u32]> {
        self.generation.as_deref()
    }

    pub fn interior(&self) -> &[bool] {
        &self.interior
    }

    #[inline]
    pub fn is_interior(&self, v: usize) -> bool {
        self.interior[v]
    }

    /// True when every vertex has its full neighbourhood present.
    pub fn is_complete_host(&self) -> bool {
        self.interior.iter().all(|&b| b)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.deg(v)).max().unwrap_or(0)
    }
}

/// `deg(v) = |N(v)|`.
pub fn degree(g: &Graph, v: usize) -> Result<usize> {
    g.check_vertex(v)?;
    Ok(g.deg(v))
}

/// Membership mask over `V` with the deduplicated, sorted member list.
pub(crate) struct Mask {
    pub members: Vec<usize>,
    pub inside: Vec<bool>,
}

impl Mask {
    pub fn new(g: &Graph, members: &[usize]) -> Result<Mask> {
        let mut inside = vec![false; g.vertex_count()];
        let mut list = Vec::with_capacity(members.len());
        for &v in members {
            g.check_vertex(v)?;
            if !inside[v] {
                inside[v] = true;
                list.push(v);
            }
        }
        list.sort_unstable();
        Ok(Mask { members: list, inside })
    }

    /// Members of each complete block that lie inside the mask.
    fn block_counts(&self, g: &Graph) -> Vec<u64> {
        let mut counts = vec![0u64; g.blocks.len()];
        for &v in &self.members {
            if let Some(b) = g.block_index(v) {
                counts[b] += 1;
            }
        }
        counts
    }

    pub fn boundary_count(&self, g: &Graph) -> u64 {
        let counts = self.block_counts(g);
        let mut total = 0u64;
        for &v in &self.members {
            total += g
                .explicit_neighbors(v)
                .iter()
                .filter(|&&u| !self.inside[u as usize])
                .count() as u64;
            if let Some(b) = g.block_index(v) {
                total += g.blocks[b].len() as u64 - counts[b];
            }
        }
        total
    }

    pub fn internal_edge_count(&self, g: &Graph) -> u64 {
        let counts = self.block_counts(g);
        let mut twice = 0u64;
        for &v in &self.members {
            twice += g
                .explicit_neighbors(v)
                .iter()
                .filter(|&&u| self.inside[u as usize])
                .count() as u64;
        }
        let blocks: u64 = counts.iter().map(|&k| k * k.saturating_sub(1) / 2).sum();
        twice / 2 + blocks
    }

    pub fn area(&self, g: &Graph) -> u64 {
        self.members.iter().map(|&v| g.deg(v) as u64).sum()
    }
}

struct DisjointSets {
    parent: Vec<u32>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let up = self.parent[self.parent[x] as usize];
            self.parent[x] = up;
            x = up as usize;
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo as u32;
        }
    }
}

fn count_complement_components(g: &Graph, inside: &[bool]) -> usize {
    let n = g.vertex_count();
    let mut sets = DisjointSets::new(n);
    for v in (0..n).filter(|&v| !inside[v]) {
        for &u in g.explicit_neighbors(v) {
            let u = u as usize;
            if u > v && !inside[u] {
                sets.union(u, v);
            }
        }
    }
    for block in g.blocks() {
        let mut rep = None;
        for v in block.filter(|&v| !inside[v]) {
            match rep {
                None => rep = Some(v),
                Some(r) => sets.union(r, v),
            }
        }
    }
    // all components reaching the truncation boundary are one infinite hole
    let mut outer = None;
    for v in (0..n).filter(|&v| !inside[v] && !g.is_interior(v)) {
        match outer {
            None => outer = Some(v),
            Some(r) => sets.union(r, v),
        }
    }
    (0..n).filter(|&v| !inside[v] && sets.find(v) == v).count()
}

/// A vertex subset `W` with `|∂_E W|`, `A(W)` and `C(W)` cached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    members: Vec<usize>,
    boundary_edges: u64,
    area: u64,
    complement_components: usize,
}

impl VertexSet {
    pub fn new(g: &Graph, members: &[usize]) -> Result<VertexSet> {
        let mask = Mask::new(g, members)?;
        Ok(VertexSet {
            boundary_edges: mask.boundary_count(g),
            area: mask.area(g),
            complement_components: count_complement_components(g, &mask.inside),
            members: mask.members,
        })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn boundary_edges(&self) -> u64 {
        self.boundary_edges
    }

    pub fn area(&self) -> u64 {
        self.area
    }

    pub fn complement_components(&self) -> usize {
        self.complement_components
    }

    /// `|E_W|`, recovered from `A(W) = 2|E_W| + |∂_E W|`.
    pub fn internal_edges(&self) -> u64 {
        (self.area - self.boundary_edges) / 2
    }

    /// `|∂_E W| / A(W)`, `None` for the empty set.
    pub fn cheeger_ratio(&self) -> Option<Rational> {
        (self.area > 0).then(|| Rational::new(self.boundary_edges as i128, self.area as i128))
    }
}

/// Breadth-first distances from `center`; [`UNREACHED`] marks other
/// components. Complete blocks are expanded once, so the cost is linear in
/// the stored size of the graph.
pub fn bfs_distances(g: &Graph, center: usize) -> Result<Vec<u32>> {
    bfs_limited(g, center, u32::MAX - 1)
}

fn bfs_limited(g: &Graph, center: usize, radius: u32) -> Result<Vec<u32>> {
    g.check_vertex(center)?;
    let mut dist = vec![UNREACHED; g.vertex_count()];
    let mut expanded = vec![false; g.blocks.len()];
    let mut queue = VecDeque::new();
    dist[center] = 0;
    queue.push_back(center);
    while let Some(v) = queue.pop_front() {
        let d = dist[v];
        if d >= radius {
            continue;
        }
        for &u in g.explicit_neighbors(v) {
            let u = u as usize;
            if dist[u] == UNREACHED {
                dist[u] = d + 1;
                queue.push_back(u);
            }
        }
        if let Some(b) = g.block_index(v) {
            if !expanded[b] {
                expanded[b] = true;
                let block = g.blocks[b].clone();
                for u in block.map(|u| u as usize) {
                    if dist[u] == UNREACHED {
                        dist[u] = d + 1;
                        queue.push_back(u);
                    }
                }
            }
        }
    }
    Ok(dist)
}

/// Distance ball `{v : d(center, v) ≤ r}`.
pub fn ball(g: &Graph, center: usize, r: u32) -> Result<VertexSet> {
    let dist = bfs_limited(g, center, r)?;
    let members: Vec<usize> = (0..g.vertex_count()).filter(|&v| dist[v] <= r).collect();
    VertexSet::new(g, &members)
}

/// Edges with exactly one endpoint in `w`, as sorted `(min, max)` pairs.
pub fn edge_boundary(g: &Graph, w: &[usize]) -> Result<Vec<(usize, usize)>> {
    let mask = Mask::new(g, w)?;
    let mut out = Vec::new();
    for &v in &mask.members {
        for &u in g.explicit_neighbors(v) {
            let u = u as usize;
            if !mask.inside[u] {
                out.push((v.min(u), v.max(u)));
            }
        }
        if let Some(block) = g.block_of(v) {
            for u in block.filter(|&u| !mask.inside[u]) {
                out.push((v.min(u), v.max(u)));
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// `|∂_E W|` without materialising the edge list.
pub fn boundary_edge_count(g: &Graph, w: &[usize]) -> Result<u64> {
    Ok(Mask::new(g, w)?.boundary_count(g))
}

/// `|E_W|`, the number of edges with both endpoints in `w`.
pub fn internal_edge_count(g: &Graph, w: &[usize]) -> Result<u64> {
    Ok(Mask::new(g, w)?.internal_edge_count(g))
}

/// `A(W) = Σ_{v∈W} deg(v)`.
pub fn area(g: &Graph, w: &[usize]) -> Result<u64> {
    Ok(Mask::new(g, w)?.area(g))
}

/// `C(W)`: components of the subgraph induced by `V \ W`, with every
/// component that touches a non-interior vertex counted once in total.
pub fn complement_components(g: &Graph, w: &[usize]) -> Result<usize> {
    let mask = Mask::new(g, w)?;
    Ok(count_complement_components(g, &mask.inside))
}

/// Whether the subgraph induced by `w` is connected (the empty set is not).
pub fn is_connected(g: &Graph, w: &[usize]) -> Result<bool> {
    let mask = Mask::new(g, w)?;
    let Some(&start) = mask.members.first() else {
        return Ok(false);
    };
    let mut seen = vec![false; g.vertex_count()];
    let mut expanded = vec![false; g.blocks.len()];
    let mut stack = vec![start];
    seen[start] = true;
    let mut reached = 1usize;
    while let Some(v) = stack.pop() {
        let mut visit = |u: usize, stack: &mut Vec<usize>| {
            if mask.inside[u] && !seen[u] {
                seen[u] = true;
                reached += 1;
                stack.push(u);
            }
        };
        for &u in g.explicit_neighbors(v) {
            visit(u as usize, &mut stack);
        }
        if let Some(b) = g.block_index(v) {
            if !expanded[b] {
                expanded[b] = true;
                for u in g.block_of(v).into_iter().flatten() {
                    visit(u, &mut stack);
                }
            }
        }
    }
    Ok(reached == mask.members.len())
}

/// Level of every vertex: the generation label when present, otherwise the
/// breadth-first distance from vertex 0.
pub fn levels(g: &Graph) -> Vec<u32> {
    match g.generation() {
        Some(labels) => labels.to_vec(),
        None => bfs_distances(g, 0).unwrap_or_else(|_| vec![UNREACHED; g.vertex_count()]),
    }
}

fn labels(g: &Graph) -> Result<&[u32]> {
    g.generation().ok_or(Error::MissingGenerations)
}

/// Shell `S_k`: the vertices labelled `k`.
pub fn shell(g: &Graph, k: u32) -> Result<VertexSet> {
    let labels = labels(g)?;
    let members: Vec<usize> = (0..g.vertex_count()).filter(|&v| labels[v] == k).collect();
    VertexSet::new(g, &members)
}

/// Generation ball `B_k`: the vertices labelled `k` or less.
pub fn generation_ball(g: &Graph, k: u32) -> Result<VertexSet> {
    let labels = labels(g)?;
    let members: Vec<usize> = (0..g.vertex_count()).filter(|&v| labels[v] <= k).collect();
    VertexSet::new(g, &members)
}

/// `(deg₋(v), deg₊(v))`: neighbours one shell inwards and one outwards.
pub fn deg_pm(g: &Graph, v: usize) -> Result<(usize, usize)> {
    let labels = labels(g)?;
    g.check_vertex(v)?;
    Ok(deg_pm_with(g, labels, v))
}

pub(crate) fn deg_pm_with(g: &Graph, labels: &[u32], v: usize) -> (usize, usize) {
    let l = labels[v];
    let mut back = 0;
    let mut forward = 0;
    // block neighbours share the shell of `v` in every family built here,
    // but arbitrary inputs may not, so they are inspected too
    for u in g.explicit_neighbors(v).iter().map(|&u| u as usize) {
        tally(labels[u], l, &mut back, &mut forward);
    }
    if let Some(block) = g.block_of(v) {
        let first = labels[block.start];
        if block.clone().all(|u| labels[u] == first) {
            let others = block.len() - 1;
            if first + 1 == l {
                back += others;
            } else if first == l + 1 {
                forward += others;
            }
        } else {
            for u in block.filter(|&u| u != v) {
                tally(labels[u], l, &mut back, &mut forward);
            }
        }
    }
    (back, forward)
}

fn tally(label: u32, own: u32, back: &mut usize, forward: &mut usize) {
    if label.checked_add(1) == Some(own) {
        *back += 1;
    } else if own.checked_add(1) == Some(label) {
        *forward += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        let mut b = GraphBuilder::new(3);
        b.add_edge(0, 1).add_edge(1, 2);
        b.build().unwrap()
    }

    fn k(n: usize) -> Graph {
        let mut b = GraphBuilder::new(n);
        b.add_complete_block(0..n);
        b.build().unwrap()
    }

    #[test]
    fn degrees() {
        let g = k(5);
        assert!((0..5).all(|v| degree(&g, v).unwrap() == 4));
        assert_eq!(degree(&path3(), 1).unwrap(), 2);
        assert_eq!(degree(&path3(), 3), Err(Error::InvalidVertex(3)));
    }

    #[test]
    fn neighbours_merge_block_and_list() {
        let mut b = GraphBuilder::new(6);
        b.add_complete_block(1..4).add_edge(0, 2).add_edge(2, 5).add_edge(4, 5).add_edge(3, 4);
        let g = b.build().unwrap();
        assert_eq!(g.neighbors(2).collect::<Vec<_>>(), [0, 1, 3, 5]);
        assert_eq!(g.neighbors(2).len(), 4);
        assert_eq!(g.deg(3), 3);
        assert!(g.adjacent(1, 3));
        assert!(!g.adjacent(1, 5));
        assert_eq!(g.edge_count(), 7);
        assert_eq!(g.edges().count(), 7);
    }

    #[test]
    fn rejects_invariant_violations() {
        let mut b = GraphBuilder::new(3);
        b.add_edge(0, 1).add_edge(1, 1);
        assert!(matches!(b.build(), Err(Error::Violation(Violation { item: GraphItem::Edge, index: 1, .. }))));

        let mut b = GraphBuilder::new(3);
        b.add_edge(0, 1).add_edge(1, 2).add_edge(2, 1);
        assert!(matches!(b.build(), Err(Error::Violation(Violation { item: GraphItem::Edge, index: 2, .. }))));

        let mut b = GraphBuilder::new(3);
        b.add_edge(0, 1);
        assert!(matches!(b.build(), Err(Error::Violation(Violation { item: GraphItem::Vertex, index: 2, .. }))));

        let mut b = GraphBuilder::new(3);
        b.add_edge(0, 1).add_edge(1, 2).faces(vec![vec![0, 1, 2]]);
        assert!(matches!(b.build(), Err(Error::Violation(Violation { item: GraphItem::Face, index: 0, .. }))));

        let mut b = GraphBuilder::new(3);
        b.add_complete_block(0..3).add_edge(0, 2);
        assert!(matches!(b.build(), Err(Error::Violation(Violation { item: GraphItem::Edge, index: 0, .. }))));

        let mut b = GraphBuilder::new(2);
        b.add_edge(0, 7);
        assert!(b.build().is_err());
    }

    #[test]
    fn single_vertex_is_allowed() {
        let g = GraphBuilder::new(1).build().unwrap();
        assert_eq!(g.deg(0), 0);
    }

    #[test]
    fn balls() {
        let g = path3();
        assert_eq!(ball(&g, 0, 0).unwrap().members(), [0]);
        assert_eq!(ball(&g, 0, 1).unwrap().members(), [0, 1]);
        assert_eq!(ball(&g, 2, 5).unwrap().len(), 3);
    }

    #[test]
    fn boundary_area_components() {
        let g = path3();
        assert_eq!(edge_boundary(&g, &[1]).unwrap(), [(0, 1), (1, 2)]);
        assert!(edge_boundary(&g, &[0, 1, 2]).unwrap().is_empty());
        assert_eq!(area(&g, &[0, 2]).unwrap(), 2);
        assert_eq!(complement_components(&g, &[0, 2]).unwrap(), 1);
        assert_eq!(complement_components(&g, &[1]).unwrap(), 2);
        assert_eq!(complement_components(&g, &[0, 1, 2]).unwrap(), 0);
    }

    #[test]
    fn boundary_components_merge() {
        // cycle 0..6, vertices 3 and 4 on the truncation boundary
        let mut b = GraphBuilder::new(6);
        for i in 0..6 {
            b.add_edge(i, (i + 1) % 6);
        }
        b.interior(vec![true, true, true, false, true, false]);
        let g = b.build().unwrap();
        // removing {1, 4} splits the cycle into {2,3} and {5,0}; both reach
        // the boundary, so they are the same hole
        assert_eq!(complement_components(&g, &[1, 4]).unwrap(), 1);
        assert_eq!(complement_components(&g, &[0, 2]).unwrap(), 2);
    }

    #[test]
    fn block_statistics_match_expansion() {
        let mut b = GraphBuilder::new(7);
        b.add_complete_block(1..5).add_edge(0, 1).add_edge(0, 2).add_edge(4, 5).add_edge(5, 6).add_edge(3, 6);
        let blocked = b.build().unwrap();
        let mut e = GraphBuilder::new(7);
        for (u, v) in blocked.edges() {
            e.add_edge(u, v);
        }
        let explicit = e.build().unwrap();
        for w in [vec![1usize, 2], vec![0, 3, 4], vec![2, 5], vec![1, 2, 3, 4], vec![6]] {
            assert_eq!(edge_boundary(&blocked, &w).unwrap(), edge_boundary(&explicit, &w).unwrap());
            assert_eq!(
                boundary_edge_count(&blocked, &w).unwrap(),
                edge_boundary(&explicit, &w).unwrap().len() as u64
            );
            assert_eq!(internal_edge_count(&blocked, &w).unwrap(), internal_edge_count(&explicit, &w).unwrap());
            assert_eq!(complement_components(&blocked, &w).unwrap(), complement_components(&explicit, &w).unwrap());
            assert_eq!(is_connected(&blocked, &w).unwrap(), is_connected(&explicit, &w).unwrap());
        }
        assert_eq!(bfs_distances(&blocked, 0).unwrap(), bfs_distances(&explicit, 0).unwrap());
    }

    #[test]
    fn shells_need_labels() {
        assert_eq!(shell(&path3(), 1), Err(Error::MissingGenerations));
        let mut b = GraphBuilder::new(4);
        b.add_edge(0, 1).add_edge(0, 2).add_edge(0, 3).generation(vec![0, 1, 1, 1]);
        let star = b.build().unwrap();
        assert_eq!(shell(&star, 1).unwrap().members(), [1, 2, 3]);
        assert_eq!(deg_pm(&star, 0).unwrap(), (0, 3));
        assert_eq!(deg_pm(&star, 2).unwrap(), (1, 0));
        assert_eq!(generation_ball(&star, 0).unwrap().members(), [0]);
    }
}
