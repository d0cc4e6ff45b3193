use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::MAX_VERTICES;
use crate::graph::{Graph, GraphBuilder};
use crate::{Error, Result};

/// Parameters of a `{p,q}` patch: `p`-gons, `q` of them at every vertex,
/// grown for `layers` rounds around a seed face.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TessellationParams {
    pub p: u32,
    pub q: u32,
    pub layers: u32,
}

impl TessellationParams {
    pub fn new(p: u32, q: u32, layers: u32) -> Result<Self> {
        let params = TessellationParams { p, q, layers };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let TessellationParams { p, q, layers } = *self;
        if p < 3 || q < 3 {
            return Err(Error::InvalidParameter(format!("{{{p},{q}}} needs p >= 3 and q >= 3")));
        }
        if (p as u64 - 2) * (q as u64 - 2) < 4 {
            return Err(Error::InvalidParameter(format!(
                "{{{p},{q}}} tiles the sphere, not the plane: (p-2)(q-2) < 4"
            )));
        }
        if layers < 1 {
            return Err(Error::InvalidParameter("layers must be at least 1".into()));
        }
        Ok(())
    }
}

/// Combinatorial growth state. The patch is always a disc whose boundary
/// cycle is kept as a doubly linked list.
struct Growth {
    p: usize,
    q: usize,
    adjacency: Vec<Vec<usize>>,
    faces: Vec<Vec<usize>>,
    face_count: Vec<usize>,
    next: Vec<usize>,
    prev: Vec<usize>,
    closed: Vec<bool>,
    anchor: usize,
}

impl Growth {
    fn seed(p: usize, q: usize) -> Growth {
        let mut g = Growth {
            p,
            q,
            adjacency: vec![Vec::new(); p],
            faces: vec![(0..p).collect()],
            face_count: vec![1; p],
            next: (0..p).map(|v| (v + 1) % p).collect(),
            prev: (0..p).map(|v| (v + p - 1) % p).collect(),
            closed: vec![false; p],
            anchor: 0,
        };
        for v in 0..p {
            g.link(v, (v + 1) % p);
        }
        g
    }

    fn link(&mut self, u: usize, v: usize) {
        self.adjacency[u].push(v);
        self.adjacency[v].push(u);
    }

    fn add_vertex(&mut self) -> Result<usize> {
        let v = self.adjacency.len();
        if v as u64 >= MAX_VERTICES {
            return Err(Error::TooLarge(v as u64 + 1));
        }
        self.adjacency.push(Vec::new());
        self.face_count.push(0);
        self.next.push(usize::MAX);
        self.prev.push(usize::MAX);
        self.closed.push(false);
        Ok(v)
    }

    fn missing_faces(&self, v: usize) -> usize {
        self.q - self.face_count[v]
    }

    /// Attach one face outside the boundary edge `v → next(v)`.
    ///
    /// The face swallows every neighbouring boundary vertex for which it is
    /// the last missing face, then closes up with fresh vertices.
    fn glue(&mut self, v: usize) -> Result<()> {
        let mut path = VecDeque::from([v, self.next[v]]);
        while self.missing_faces(path[0]) == 1 {
            let u = self.prev[path[0]];
            if path.contains(&u) || path.len() > self.p {
                return Err(Error::Tessellation(format!("boundary collapsed at vertex {u}")));
            }
            path.push_front(u);
        }
        while self.missing_faces(*path.back().unwrap()) == 1 {
            let u = self.next[*path.back().unwrap()];
            if path.contains(&u) || path.len() > self.p {
                return Err(Error::Tessellation(format!("boundary collapsed at vertex {u}")));
            }
            path.push_back(u);
        }
        if path.len() > self.p {
            return Err(Error::Tessellation(format!(
                "a face at vertex {v} would need {} boundary vertices",
                path.len()
            )));
        }
        let first = path[0];
        let last = *path.back().unwrap();
        let fresh = self.p - path.len();
        let mut face: Vec<usize> = path.iter().copied().collect();
        if fresh == 0 {
            if self.adjacency[first].contains(&last) {
                return Err(Error::Tessellation(format!("closing edge {first}-{last} already exists")));
            }
            self.link(last, first);
            self.next[first] = last;
            self.prev[last] = first;
        } else {
            let mut behind = last;
            for _ in 0..fresh {
                let u = self.add_vertex()?;
                self.link(behind, u);
                face.push(u);
                behind = u;
            }
            self.link(behind, first);
            // new boundary: first → n_m → … → n_1 → last
            let mut at = first;
            for &u in face[path.len()..].iter().rev() {
                self.next[at] = u;
                self.prev[u] = at;
                at = u;
            }
            self.next[at] = last;
            self.prev[last] = at;
        }
        for &u in &face {
            self.face_count[u] += 1;
        }
        for &u in path.iter().skip(1).take(path.len() - 2) {
            if self.face_count[u] != self.q || self.adjacency[u].len() != self.q {
                return Err(Error::Tessellation(format!(
                    "vertex {u} closed with {} faces and degree {}",
                    self.face_count[u],
                    self.adjacency[u].len()
                )));
            }
            self.closed[u] = true;
            self.next[u] = usize::MAX;
            self.prev[u] = usize::MAX;
        }
        self.faces.push(face);
        self.anchor = first;
        Ok(())
    }

    /// Close every vertex currently on the boundary, in cyclic order from
    /// the smallest id.
    fn grow_layer(&mut self) -> Result<()> {
        let mut ring = vec![self.anchor];
        let mut at = self.next[self.anchor];
        while at != self.anchor {
            ring.push(at);
            at = self.next[at];
        }
        let start = (0..ring.len()).min_by_key(|&i| ring[i]).unwrap();
        ring.rotate_left(start);
        for v in ring {
            while !self.closed[v] {
                self.glue(v)?;
            }
        }
        Ok(())
    }

    fn distances_from_zero(&self) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.adjacency.len()];
        let mut queue = VecDeque::from([0usize]);
        dist[0] = 0;
        while let Some(v) = queue.pop_front() {
            for &u in &self.adjacency[v] {
                if dist[u] == u32::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        dist
    }
}

/// A patch of the `{p,q}` tessellation: the seed face (`layers = 1`) plus
/// `layers − 1` rounds in which every boundary vertex receives its full fan
/// of `q` faces. Closed vertices are interior; labels are graph distances
/// from vertex 0.
pub fn tessellation_patch(params: &TessellationParams) -> Result<Graph> {
    params.validate()?;
    let mut growth = Growth::seed(params.p as usize, params.q as usize);
    for _ in 1..params.layers {
        growth.grow_layer()?;
    }
    let n = growth.adjacency.len();
    let labels = growth.distances_from_zero();
    let mut b = GraphBuilder::new(n);
    for (u, list) in growth.adjacency.iter().enumerate() {
        for &v in list.iter().filter(|&&v| v > u) {
            b.add_edge(u, v);
        }
    }
    b.faces(growth.faces).generation(labels).interior(growth.closed);
    b.build()
}

fn is_face_edge(face: &[usize], u: usize, v: usize) -> bool {
    let k = face.len();
    (0..k).any(|i| {
        let (a, b) = (face[i], face[(i + 1) % k]);
        (a == u && b == v) || (a == v && b == u)
    })
}

/// Checks the combinatorial tessellation conditions on a patch: every edge
/// at an interior vertex lies in exactly two faces, every edge lies in at
/// most two, interior vertices see as many faces as edges, and two faces
/// meet in nothing, a vertex, or a common edge.
pub fn check_tessellation(g: &Graph) -> Result<()> {
    let faces = g.faces().ok_or(Error::NotTessellation)?;
    let mut edge_faces: Vec<(usize, usize)> = Vec::new();
    for face in faces {
        let k = face.len();
        for i in 0..k {
            let (a, b) = (face[i], face[(i + 1) % k]);
            edge_faces.push((a.min(b), a.max(b)));
        }
    }
    edge_faces.sort_unstable();
    let multiplicity = |u: usize, v: usize| {
        let key = (u.min(v), u.max(v));
        let lo = edge_faces.partition_point(|e| *e < key);
        let hi = edge_faces.partition_point(|e| *e <= key);
        hi - lo
    };
    for (u, v) in g.edges() {
        let m = multiplicity(u, v);
        if m > 2 || ((g.is_interior(u) || g.is_interior(v)) && m != 2) {
            return Err(Error::Tessellation(format!("edge {u}-{v} lies in {m} faces")));
        }
    }
    for v in 0..g.vertex_count() {
        let at = g.faces_at(v).unwrap();
        if g.is_interior(v) && at.len() != g.deg(v) {
            return Err(Error::Tessellation(format!(
                "interior vertex {v} has degree {} but {} faces",
                g.deg(v),
                at.len()
            )));
        }
        for (i, &f) in at.iter().enumerate() {
            for &h in &at[i + 1..] {
                let (ff, hf) = (&faces[f as usize], &faces[h as usize]);
                let common: Vec<usize> = ff.iter().copied().filter(|x| hf.contains(x)).collect();
                let ok = match common.len() {
                    1 => true,
                    2 => is_face_edge(ff, common[0], common[1]) && is_face_edge(hf, common[0], common[1]),
                    _ => false,
                };
                if !ok {
                    return Err(Error::Tessellation(format!(
                        "faces {f} and {h} meet in {} vertices",
                        common.len()
                    )));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn patch(p: u32, q: u32, layers: u32) -> Graph {
        tessellation_patch(&TessellationParams::new(p, q, layers).unwrap()).unwrap()
    }

    #[test]
    fn seed_face_only() {
        let g = patch(5, 4, 1);
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.faces().unwrap().len(), 1);
        assert!(g.interior().iter().all(|&b| !b));
    }

    #[test]
    fn square_lattice() {
        let g = patch(4, 4, 2);
        // a 3×3 block of squares around the seed: 16 vertices, 9 faces
        assert_eq!(g.vertex_count(), 16);
        assert_eq!(g.faces().unwrap().len(), 9);
        assert_eq!(g.interior().iter().filter(|&&b| b).count(), 4);
        check_tessellation(&g).unwrap();
    }

    #[test]
    fn families_satisfy_the_face_conditions() {
        for (p, q, layers) in [(3, 7, 4), (4, 5, 4), (5, 4, 4), (3, 6, 5), (4, 4, 5), (6, 3, 5), (7, 3, 4), (3, 12, 3), (8, 8, 3)] {
            let g = patch(p, q, layers);
            check_tessellation(&g).unwrap();
            for v in (0..g.vertex_count()).filter(|&v| g.is_interior(v)) {
                assert_eq!(g.deg(v), q as usize, "{{{p},{q}}} vertex {v}");
                assert_eq!(g.faces_at(v).unwrap().len(), q as usize);
            }
            assert!(g.faces().unwrap().iter().all(|f| f.len() == p as usize));
            // Euler: V − E + (F + 1) = 2 on the disc
            let (v, e, f) = (g.vertex_count() as i64, g.edge_count() as i64, g.faces().unwrap().len() as i64);
            assert_eq!(v - e + f + 1, 2, "{{{p},{q}}}");
        }
    }

    #[test]
    fn spherical_parameters_are_rejected() {
        assert!(TessellationParams::new(3, 5, 2).is_err());
        assert!(TessellationParams::new(4, 3, 2).is_err());
        assert!(TessellationParams::new(2, 7, 2).is_err());
        assert!(TessellationParams::new(3, 7, 0).is_err());
    }
}
