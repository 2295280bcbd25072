//! Encodings of pointed maps by labeled trees, forests and mobiles.
//!
//! Corners are listed along the contour and each corner is joined to its
//! successor, the next corner with label one less. Only forward maps are
//! provided; bijectivity is certified by counting in the tests.

mod chords;
mod successor;

use std::hash::{DefaultHasher, Hash, Hasher};

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::map::{MapError, PlaneMap, NONE};
use crate::trees::{CornerMode, LabeledForest, MobileForest, WellLabeledTree};

pub use successor::SuccessorTable;

use chords::Root;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BijectionError {
    #[error("corner index out of range")]
    BadIndex,
    #[error("tree must have at least one edge")]
    EmptyTree,
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BijectionKind {
    Cvs,
    Slice,
    Boundary,
    Bdg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Rooting {
    /// Arc from the first corner to its successor, oriented away from the tree root.
    FirstArc,
    /// Root corner in the outer face, root edge pointing away from `v_*`.
    AwayFromStar,
    /// Uniform boundary corner chosen after the construction.
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub kind: BijectionKind,
    pub source_hash: u64,
    pub rooting: Rooting,
}

/// A rooted map with a distinguished vertex.
#[derive(Debug, Clone)]
pub struct PointedMap {
    pub map: PlaneMap,
    pub star: u32,
    pub provenance: Provenance,
    /// Label of every map vertex; `v_*` carries `min - 1`.
    pub labels: Vec<i64>,
    /// Map vertex of every vertex of the source object (`NONE` for black vertices).
    pub vertex_of_source: Vec<u32>,
}

impl PointedMap {
    /// Distance identity `d(v, v_*) = ℓ(v) - ℓ(v_*)` for every vertex.
    pub fn check_distances(&self) -> Result<(), u32> {
        let d = self.map.bfs_distances(self.star).map_err(|_| self.star)?;
        let base = self.labels[self.star as usize];
        for v in 0..self.map.num_vertices() as u32 {
            if d.get(v) as i64 != self.labels[v as usize] - base {
                return Err(v);
            }
        }
        Ok(())
    }

    /// Whether the root edge points away from `v_*`.
    pub fn root_points_away(&self) -> bool {
        let d = self.map.bfs_distances(self.star).expect("star in range");
        root_points_away(&self.map, &d.dist)
    }
}

/// `e_*` is the edge entering the root vertex just before the root corner,
/// clockwise. It points away when its head is one step farther than its tail.
pub fn root_points_away(map: &PlaneMap, dist: &[u32]) -> bool {
    let Some(h) = map.root() else { return false };
    let e = map.next(h);
    let head = map.vertex_of(h);
    let tail = map.vertex_of(map.opposite(e));
    dist[head as usize] == dist[tail as usize] + 1
}

fn hash_of<T: Hash>(x: &T) -> u64 {
    let mut s = DefaultHasher::new();
    x.hash(&mut s);
    s.finish()
}

fn map_labels(map: &PlaneMap, vertex: &[u32], labels: &[i64], star: Option<(u32, i64)>) -> Vec<i64> {
    let mut out = vec![0; map.num_vertices()];
    for (v, &m) in vertex.iter().enumerate().take(labels.len()) {
        if m != NONE {
            out[m as usize] = labels[v];
        }
    }
    if let Some((s, l)) = star {
        out[s as usize] = l;
    }
    out
}

/// Quadrangulation with `n` faces pointed at `v_*`.
pub fn cvs_forward(tree: &WellLabeledTree) -> Result<PointedMap, BijectionError> {
    let f = &tree.forest;
    if f.num_trees() != 1 || f.num_edges() == 0 {
        return Err(BijectionError::EmptyTree);
    }
    let pts = f.corner_vertices(false, CornerMode::TreePeriodic);
    let labs: Vec<i64> = pts.iter().map(|&v| tree.labels[v as usize]).collect();
    let table = SuccessorTable::cyclic(&labs);
    let nv = f.num_vertices();
    let cm = chords::build(&pts, nv, &table, Root::OutgoingAtZero)?;
    let star = cm.vertex[nv];
    let labels = map_labels(&cm.map, &cm.vertex, &tree.labels, Some((star, tree.min_label() - 1)));
    Ok(PointedMap {
        map: cm.map,
        star,
        provenance: Provenance {
            kind: BijectionKind::Cvs,
            source_hash: hash_of(tree),
            rooting: Rooting::FirstArc,
        },
        labels,
        vertex_of_source: cm.vertex[..nv].to_vec(),
    })
}

/// Quadrangulation with boundary of perimeter `2l`, rooted away from `v_*`.
pub fn boundary_forward(forest: &LabeledForest) -> Result<PointedMap, BijectionError> {
    let f = &forest.forest;
    let pts = f.corner_vertices(false, CornerMode::ForestCycle);
    let labs: Vec<i64> = pts.iter().map(|&v| forest.labels[v as usize]).collect();
    let table = SuccessorTable::cyclic(&labs);
    let nv = f.num_vertices();
    let cm = chords::build(&pts, nv, &table, Root::BeforeZero)?;
    let star = cm.vertex[nv];
    let labels =
        map_labels(&cm.map, &cm.vertex, &forest.labels, Some((star, forest.min_label() - 1)));
    Ok(PointedMap {
        map: cm.map,
        star,
        provenance: Provenance {
            kind: BijectionKind::Boundary,
            source_hash: hash_of(forest),
            rooting: Rooting::AwayFromStar,
        },
        labels,
        vertex_of_source: cm.vertex[..nv].to_vec(),
    })
}

/// Bipartite map with boundary: white vertices become the vertices other than
/// `v_*`, black vertices of degree `k` become internal faces of degree `2k`.
pub fn bdg_forward(mobile: &MobileForest) -> Result<PointedMap, BijectionError> {
    let f = &mobile.forest;
    let pts = f.corner_vertices(true, CornerMode::ForestCycle);
    let labs: Vec<i64> = pts.iter().map(|&v| mobile.labels[v as usize]).collect();
    let table = SuccessorTable::cyclic(&labs);
    let nv = f.num_vertices();
    let cm = chords::build(&pts, nv, &table, Root::BeforeZero)?;
    let star = cm.vertex[nv];
    let labels = map_labels(
        &cm.map,
        &cm.vertex,
        &mobile.labels,
        Some((star, mobile.min_white_label() - 1)),
    );
    Ok(PointedMap {
        map: cm.map,
        star,
        provenance: Provenance {
            kind: BijectionKind::Bdg,
            source_hash: hash_of(mobile),
            rooting: Rooting::AwayFromStar,
        },
        labels,
        vertex_of_source: cm.vertex[..nv].to_vec(),
    })
}

/// A slice together with its two boundary geodesics.
#[derive(Debug, Clone)]
pub struct Slice {
    pub pointed: PointedMap,
    /// Vertices of the maximal geodesic from the root vertex to `v_*`.
    pub geodesic: Vec<u32>,
    /// Vertices of the shuttle from the root vertex to `v_*`.
    pub shuttle: Vec<u32>,
    /// Half-edge whose corner lies in the distinguished face.
    pub face_half_edge: u32,
    /// For each arc `i < 2n`, the corner index of its successor in the slice.
    pub successor: Vec<usize>,
}

impl Slice {
    pub fn distinguished_face(&self) -> u32 {
        self.pointed.map.face_of(self.face_half_edge)
    }

    pub fn length(&self) -> usize {
        self.shuttle.len() - 1
    }
}

/// Slice coded by a tree: corners `c_0..c_{2n}` followed by the shuttle corners
/// `c'_1..c'_d` with labels `ℓ(c_0) - i`, the last one being `v_*`.
pub fn slice_forward(tree: &WellLabeledTree) -> Result<Slice, BijectionError> {
    let f = &tree.forest;
    if f.num_trees() != 1 || f.num_edges() == 0 {
        return Err(BijectionError::EmptyTree);
    }
    let nv = f.num_vertices();
    let mut pts = f.corner_vertices(false, CornerMode::TreeSlice);
    let two_n = pts.len() - 1;
    let l0 = tree.labels[0];
    let lstar = tree.min_label() - 1;
    let d = (l0 - lstar) as usize;
    let mut labs: Vec<i64> = pts.iter().map(|&v| tree.labels[v as usize]).collect();
    for i in 1..=d {
        pts.push((nv + i - 1) as u32);
        labs.push(l0 - i as i64);
    }
    let table = SuccessorTable::linear(&labs);
    let cm = chords::build(&pts, nv + d, &table, Root::OutgoingAtZero)?;
    let star = cm.vertex[nv + d - 1];
    let mut src_labels = tree.labels.clone();
    src_labels.extend((1..=d).map(|i| l0 - i as i64));
    let labels = map_labels(&cm.map, &cm.vertex, &src_labels, None);
    let mut geodesic = vec![cm.vertex[0]];
    let mut p = 0;
    while p != pts.len() - 1 {
        p = table.succ[p].expect("linear successor");
        geodesic.push(cm.vertex[pts[p] as usize]);
    }
    let shuttle: Vec<u32> =
        std::iter::once(cm.vertex[0]).chain((0..d).map(|i| cm.vertex[nv + i])).collect();
    let successor = table.succ[..two_n].iter().map(|s| s.unwrap()).collect();
    Ok(Slice {
        pointed: PointedMap {
            map: cm.map,
            star,
            provenance: Provenance {
                kind: BijectionKind::Slice,
                source_hash: hash_of(tree),
                rooting: Rooting::FirstArc,
            },
            labels,
            vertex_of_source: cm.vertex[..nv].to_vec(),
        },
        geodesic,
        shuttle,
        face_half_edge: cm.first_cw[0],
        successor,
    })
}

/// Re-roots at a uniform corner of the root face, keeping `v_*`.
pub fn reroot_uniform_pointed<R: Rng + ?Sized>(pm: &PointedMap, rng: &mut R) -> PointedMap {
    let face = pm.map.face_boundary(pm.map.root_face());
    let h = face[rng.random_range(0..face.len())];
    let mut out = pm.clone();
    out.map = pm.map.with_root(h);
    out.provenance.rooting = Rooting::Uniform;
    out
}

/// Forgets `v_*` and re-roots at a uniform corner of the root face.
pub fn reroot_uniform<R: Rng + ?Sized>(pm: &PointedMap, rng: &mut R) -> PlaneMap {
    reroot_uniform_pointed(pm, rng).map
}

fn range_min(labels: &[i64], i: usize, j: usize) -> i64 {
    if i <= j {
        labels[i..=j].iter().copied().min().unwrap()
    } else {
        labels[i..].iter().chain(&labels[..=j]).copied().min().unwrap()
    }
}

/// Upper bound on the distance between the vertices of corners `i` and `j`
/// obtained from the two successor chains meeting at the smallest label on
/// the way. `cyclic` takes the better of both arcs around the contour.
pub fn wedge_bound(labels: &[i64], i: usize, j: usize, cyclic: bool) -> Result<i64, BijectionError> {
    if i >= labels.len() || j >= labels.len() {
        return Err(BijectionError::BadIndex);
    }
    let m = if cyclic {
        range_min(labels, i, j).max(range_min(labels, j, i))
    } else {
        range_min(labels, i.min(j), i.max(j))
    };
    Ok(labels[i] + labels[j] - 2 * m + 2)
}

/// [`wedge_bound`] from corner `i` to every corner, in linear time.
pub fn wedge_bound_row(labels: &[i64], i: usize, cyclic: bool) -> Vec<i64> {
    let n = labels.len();
    let mut fwd = vec![i64::MAX; n];
    let mut bwd = vec![i64::MAX; n];
    let mut m = i64::MAX;
    for k in 0..n {
        let j = (i + k) % n;
        if !cyclic && j < i {
            break;
        }
        m = m.min(labels[j]);
        fwd[j] = m;
    }
    m = i64::MAX;
    for k in 0..n {
        let j = (i + n - k) % n;
        if !cyclic && j > i {
            break;
        }
        m = m.min(labels[j]);
        bwd[j] = m;
    }
    (0..n)
        .map(|j| {
            let w = if cyclic {
                fwd[j].max(bwd[j])
            } else if j >= i {
                fwd[j]
            } else {
                bwd[j]
            };
            labels[i] + labels[j] - 2 * w + 2
        })
        .collect()
}

/// Inserts a black vertex in the middle of every edge.
pub fn expand_to_mobile(forest: &LabeledForest) -> MobileForest {
    let f = &forest.forest;
    let n = f.num_vertices();
    // preorder of the subdivided forest: every non-root vertex is preceded by its black parent
    let mut new_id = vec![0u32; n];
    let mut parent = Vec::with_capacity(n + f.num_edges());
    let mut labels = Vec::with_capacity(n + f.num_edges());
    for v in 0..n as u32 {
        let p = f.parent(v);
        if p == NONE {
            new_id[v as usize] = parent.len() as u32;
            parent.push(NONE);
        } else {
            let b = parent.len() as u32;
            parent.push(new_id[p as usize]);
            labels.push(0);
            new_id[v as usize] = b + 1;
            parent.push(b);
        }
        labels.push(forest.labels[v as usize]);
    }
    let pf = crate::trees::PlaneForest::from_parents(parent).expect("preorder kept");
    MobileForest::new(pf, labels).expect("subdivided forest is a valid mobile")
}
