//! Rooted plane maps stored as rotation systems on half-edges.
//!
//! Half-edge `h` and `h ^ 1` form an edge. `next[h]` is the counterclockwise
//! successor of `h` around its origin. The corner of `h` is the sector between
//! `h` and `next[h]`; it belongs to the face lying to the left of `h`.

mod glue;
mod io;

use std::collections::VecDeque;

use thiserror::Error;

pub use glue::enumerate_glued_maps;
pub use io::{read_pmap1, write_pmap1, MapJson};

pub const NONE: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("half-edge tables have different lengths or odd length")]
    BadLength,
    #[error("rotation table is not a permutation")]
    NotPermutation,
    #[error("opposite table is not a fixed-point-free involution")]
    NotInvolution,
    #[error("map is not connected")]
    NotConnected,
    #[error("root half-edge is missing or out of range")]
    BadRoot,
    #[error("map is not planar (V - E + F = {0})")]
    NotPlanar(i64),
    #[error("vertex {0} out of range")]
    BadVertex(u32),
    #[error("malformed input: {0}")]
    Parse(String),
}

/// Raw tables as accepted by [`PlaneMap::build`], with an explicit opposite map.
#[derive(Debug, Clone, Default)]
pub struct RawTables {
    pub next: Vec<u32>,
    pub opposite: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneMap {
    next: Vec<u32>,
    prev: Vec<u32>,
    root: Option<u32>,
    vertex_of: Vec<u32>,
    face_of: Vec<u32>,
    vertex_start: Vec<u32>,
    face_start: Vec<u32>,
    face_deg: Vec<u32>,
    vertex_deg: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceField {
    pub source: u32,
    pub dist: Vec<u32>,
}

impl PlaneMap {
    /// The vertex map: one vertex, no edges, one face.
    pub fn vertex_map() -> Self {
        PlaneMap {
            next: vec![],
            prev: vec![],
            root: None,
            vertex_of: vec![],
            face_of: vec![],
            vertex_start: vec![NONE],
            face_start: vec![NONE],
            face_deg: vec![0],
            vertex_deg: vec![0],
        }
    }

    /// Validates arbitrary tables and renumbers half-edges so that edges are `(2e, 2e+1)`.
    pub fn build(raw: RawTables, root: Option<u32>) -> Result<Self, MapError> {
        let n = raw.next.len();
        if raw.opposite.len() != n || n % 2 == 1 {
            return Err(MapError::BadLength);
        }
        for (h, &o) in raw.opposite.iter().enumerate() {
            if o as usize >= n || o as usize == h || raw.opposite[o as usize] as usize != h {
                return Err(MapError::NotInvolution);
            }
        }
        let mut new_id = vec![NONE; n];
        let mut k = 0u32;
        for h in 0..n {
            if new_id[h] == NONE {
                new_id[h] = k;
                new_id[raw.opposite[h] as usize] = k + 1;
                k += 2;
            }
        }
        let mut next = vec![0u32; n];
        for h in 0..n {
            let t = raw.next[h] as usize;
            if t >= n {
                return Err(MapError::NotPermutation);
            }
            next[new_id[h] as usize] = new_id[t];
        }
        let root = match root {
            Some(r) if (r as usize) < n => Some(new_id[r as usize]),
            Some(_) => return Err(MapError::BadRoot),
            None => None,
        };
        Self::from_next(next, root)
    }

    /// Builds from a rotation table where the opposite of `h` is `h ^ 1`.
    pub fn from_next(next: Vec<u32>, root: Option<u32>) -> Result<Self, MapError> {
        let n = next.len();
        if n % 2 == 1 {
            return Err(MapError::BadLength);
        }
        if n == 0 {
            return match root {
                None => Ok(Self::vertex_map()),
                Some(_) => Err(MapError::BadRoot),
            };
        }
        let root = match root {
            Some(r) if (r as usize) < n => r,
            _ => return Err(MapError::BadRoot),
        };
        let mut prev = vec![NONE; n];
        for (h, &t) in next.iter().enumerate() {
            if t as usize >= n || prev[t as usize] != NONE {
                return Err(MapError::NotPermutation);
            }
            prev[t as usize] = h as u32;
        }
        let mut vertex_of = vec![NONE; n];
        let mut vertex_start = Vec::new();
        let mut vertex_deg = Vec::new();
        for h in 0..n {
            if vertex_of[h] == NONE {
                let v = vertex_start.len() as u32;
                vertex_start.push(h as u32);
                let mut g = h;
                let mut d = 0;
                loop {
                    vertex_of[g] = v;
                    d += 1;
                    g = next[g] as usize;
                    if g == h {
                        break;
                    }
                }
                vertex_deg.push(d);
            }
        }
        let mut face_of = vec![NONE; n];
        let mut face_start = Vec::new();
        let mut face_deg = Vec::new();
        for h in 0..n {
            if face_of[h] == NONE {
                let f = face_start.len() as u32;
                face_start.push(h as u32);
                let mut g = h;
                let mut d = 0;
                loop {
                    face_of[g] = f;
                    d += 1;
                    g = prev[g ^ 1] as usize;
                    if g == h {
                        break;
                    }
                }
                face_deg.push(d);
            }
        }
        let map = PlaneMap {
            next,
            prev,
            root: Some(root),
            vertex_of,
            face_of,
            vertex_start,
            face_start,
            face_deg,
            vertex_deg,
        };
        if !map.is_connected() {
            return Err(MapError::NotConnected);
        }
        let euler = map.num_vertices() as i64 - map.num_edges() as i64 + map.num_faces() as i64;
        if euler != 2 {
            return Err(MapError::NotPlanar(euler));
        }
        Ok(map)
    }

    fn is_connected(&self) -> bool {
        let n = self.next.len();
        let mut seen = vec![false; n];
        let mut stack = vec![self.root.unwrap_or(0) as usize];
        seen[stack[0]] = true;
        let mut count = 1;
        while let Some(h) = stack.pop() {
            for g in [self.next[h] as usize, h ^ 1] {
                if !seen[g] {
                    seen[g] = true;
                    count += 1;
                    stack.push(g);
                }
            }
        }
        count == n
    }

    pub fn num_half_edges(&self) -> usize {
        self.next.len()
    }
    pub fn num_edges(&self) -> usize {
        self.next.len() / 2
    }
    pub fn num_vertices(&self) -> usize {
        self.vertex_start.len()
    }
    pub fn num_faces(&self) -> usize {
        self.face_start.len()
    }
    pub fn root(&self) -> Option<u32> {
        self.root
    }
    pub fn next(&self, h: u32) -> u32 {
        self.next[h as usize]
    }
    pub fn prev(&self, h: u32) -> u32 {
        self.prev[h as usize]
    }
    pub fn opposite(&self, h: u32) -> u32 {
        h ^ 1
    }
    /// Next half-edge along the boundary of the face to the left of `h`.
    pub fn face_next(&self, h: u32) -> u32 {
        self.prev[(h ^ 1) as usize]
    }
    pub fn vertex_of(&self, h: u32) -> u32 {
        self.vertex_of[h as usize]
    }
    pub fn face_of(&self, h: u32) -> u32 {
        self.face_of[h as usize]
    }
    pub fn rotation(&self) -> &[u32] {
        &self.next
    }
    pub fn vertex_degree(&self, v: u32) -> usize {
        self.vertex_deg[v as usize] as usize
    }

    pub fn root_vertex(&self) -> u32 {
        self.root.map_or(0, |r| self.vertex_of(r))
    }

    pub fn root_face(&self) -> u32 {
        self.root.map_or(0, |r| self.face_of(r))
    }

    /// Degree of the root face, i.e. twice the half-perimeter for bipartite maps.
    pub fn perimeter(&self) -> usize {
        self.face_deg[self.root_face() as usize] as usize
    }

    pub fn face_degree(&self, f: u32) -> usize {
        self.face_deg[f as usize] as usize
    }

    pub fn face_degrees(&self) -> Vec<(u32, usize)> {
        self.face_deg.iter().enumerate().map(|(f, &d)| (f as u32, d as usize)).collect()
    }

    /// Degrees of all faces other than the root face.
    pub fn internal_face_degrees(&self) -> Vec<usize> {
        let rf = self.root_face();
        self.face_deg
            .iter()
            .enumerate()
            .filter(|&(f, _)| f as u32 != rf)
            .map(|(_, &d)| d as usize)
            .collect()
    }

    pub fn is_bipartite(&self) -> bool {
        self.face_deg.iter().all(|d| d % 2 == 0)
    }

    /// Half-edges leaving `v`, in counterclockwise order.
    pub fn half_edges_at(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        let start = self.vertex_start[v as usize];
        let mut cur = start;
        let mut done = start == NONE;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let h = cur;
            cur = self.next[h as usize];
            done = cur == start;
            Some(h)
        })
    }

    /// Half-edges of face `f` in boundary order (face on the left).
    pub fn face_boundary(&self, f: u32) -> Vec<u32> {
        let start = self.face_start[f as usize];
        if start == NONE {
            return vec![];
        }
        let mut out = vec![start];
        let mut h = self.face_next(start);
        while h != start {
            out.push(h);
            h = self.face_next(h);
        }
        out
    }

    pub fn with_root(&self, root: u32) -> Self {
        assert!((root as usize) < self.next.len(), "root out of range");
        let mut m = self.clone();
        m.root = Some(root);
        m
    }

    pub fn bfs_distances(&self, source: u32) -> Result<DistanceField, MapError> {
        let mut dist = Vec::new();
        let mut queue = VecDeque::new();
        self.bfs_into(source, &mut dist, &mut queue)?;
        Ok(DistanceField { source, dist })
    }

    /// BFS with caller-provided scratch buffers.
    pub fn bfs_into(
        &self,
        source: u32,
        dist: &mut Vec<u32>,
        queue: &mut VecDeque<u32>,
    ) -> Result<(), MapError> {
        let nv = self.num_vertices();
        if source as usize >= nv {
            return Err(MapError::BadVertex(source));
        }
        dist.clear();
        dist.resize(nv, NONE);
        queue.clear();
        dist[source as usize] = 0;
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let d = dist[v as usize] + 1;
            for h in self.half_edges_at(v) {
                let w = self.vertex_of[(h ^ 1) as usize];
                if dist[w as usize] == NONE {
                    dist[w as usize] = d;
                    queue.push_back(w);
                }
            }
        }
        Ok(())
    }

    /// Double-sweep lower bound on the diameter, starting from `start`.
    pub fn double_sweep_diameter(&self, start: u32) -> u32 {
        let mut dist = Vec::new();
        let mut queue = VecDeque::new();
        self.bfs_into(start, &mut dist, &mut queue).expect("valid start");
        let far = argmax(&dist);
        self.bfs_into(far, &mut dist, &mut queue).expect("valid vertex");
        *dist.iter().max().unwrap_or(&0)
    }

    /// Edges as unordered vertex pairs `(min, max)`, one entry per edge.
    pub fn edge_vertex_pairs(&self) -> Vec<(u32, u32)> {
        (0..self.num_edges() as u32)
            .map(|e| {
                let a = self.vertex_of(2 * e);
                let b = self.vertex_of(2 * e + 1);
                (a.min(b), a.max(b))
            })
            .collect()
    }

    /// Complete invariant of the rooted map up to orientation-preserving isomorphism.
    pub fn canonical_code(&self) -> Vec<u32> {
        self.canonical_with_vertex(None)
    }

    /// Canonical code of the rooted map together with a marked vertex.
    pub fn canonical_pointed_code(&self, v: u32) -> Vec<u32> {
        self.canonical_with_vertex(Some(v))
    }

    fn canonical_with_vertex(&self, mark: Option<u32>) -> Vec<u32> {
        let n = self.next.len();
        let Some(root) = self.root else {
            return mark.map_or(vec![], |_| vec![0]);
        };
        let mut label = vec![NONE; n];
        let mut order = Vec::with_capacity(n);
        label[root as usize] = 0;
        order.push(root);
        let mut i = 0;
        while i < order.len() {
            let h = order[i] as usize;
            for g in [self.next[h], (h ^ 1) as u32] {
                if label[g as usize] == NONE {
                    label[g as usize] = order.len() as u32;
                    order.push(g);
                }
            }
            i += 1;
        }
        let mut code = Vec::with_capacity(2 * n + 1);
        for &h in &order {
            code.push(label[self.next[h as usize] as usize]);
            code.push(label[(h ^ 1) as usize]);
        }
        if let Some(v) = mark {
            let m = self.half_edges_at(v).map(|h| label[h as usize]).min().unwrap_or(0);
            code.push(m);
        }
        code
    }
}

impl DistanceField {
    pub fn get(&self, v: u32) -> u32 {
        self.dist[v as usize]
    }

    pub fn max(&self) -> u32 {
        *self.dist.iter().max().unwrap_or(&0)
    }
}

fn argmax(d: &[u32]) -> u32 {
    let mut best = 0;
    for (i, &x) in d.iter().enumerate() {
        if x != NONE && x > d[best] {
            best = i;
        }
    }
    best as u32
}
