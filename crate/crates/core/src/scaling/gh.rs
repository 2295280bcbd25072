use std::collections::VecDeque;

use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;

use crate::continuum::DiskApprox;
use crate::map::PlaneMap;

/// A finite pseudo-metric space given by its full distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetric {
    pub n: usize,
    pub d: Vec<f64>,
}

impl FiniteMetric {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                d[i * n + j] = f(i, j);
            }
        }
        FiniteMetric { n, d }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    pub fn diameter(&self) -> f64 {
        self.d.iter().copied().fold(0.0, f64::max)
    }

    pub fn scaled(&self, c: f64) -> Self {
        FiniteMetric { n: self.n, d: self.d.iter().map(|x| x * c).collect() }
    }

    /// Restriction to the listed points.
    pub fn restrict(&self, points: &[usize]) -> Self {
        FiniteMetric::from_fn(points.len(), |i, j| self.get(points[i], points[j]))
    }

    /// Graph distances between the listed vertices, divided by `scale`.
    pub fn from_map(map: &PlaneMap, vertices: &[u32], scale: f64) -> Self {
        let k = vertices.len();
        let mut d = vec![0.0; k * k];
        let mut dist = Vec::new();
        let mut queue = VecDeque::new();
        for (i, &v) in vertices.iter().enumerate() {
            map.bfs_into(v, &mut dist, &mut queue).expect("vertex of the map");
            for (j, &w) in vertices.iter().enumerate() {
                d[i * k + j] = dist[w as usize] as f64 / scale;
            }
        }
        FiniteMetric { n: k, d }
    }

    /// `D*` between the listed grid indices.
    pub fn from_disk(disk: &DiskApprox, indices: &[usize]) -> Self {
        FiniteMetric::from_fn(indices.len(), |i, j| disk.dstar(indices[i], indices[j]))
    }

    fn distance_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = (0..self.n).flat_map(|i| (i..self.n).map(move |j| (i, j))).map(|(i, j)| self.get(i, j)).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
}

/// Components of the lower bound; `bound` is their maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GhBound {
    pub diameter_term: f64,
    pub distance_set_term: f64,
    pub triple_term: f64,
    pub bound: f64,
}

fn one_sided_hausdorff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .map(|&x| {
            let k = b.partition_point(|&y| y < x);
            let above = b.get(k).map_or(f64::INFINITY, |&y| y - x);
            let below = if k > 0 { x - b[k - 1] } else { f64::INFINITY };
            above.min(below)
        })
        .fold(0.0, f64::max)
}

/// Largest over sampled triples of `a` of the distance to the closest triple of `b`.
fn triple_discrepancy<R: Rng + ?Sized>(a: &FiniteMetric, b: &FiniteMetric, triples: usize, rng: &mut R) -> f64 {
    let mut worst: f64 = 0.0;
    for _ in 0..triples {
        let (x, y, z) = (rng.random_range(0..a.n), rng.random_range(0..a.n), rng.random_range(0..a.n));
        let t = [a.get(x, y), a.get(y, z), a.get(x, z)];
        let mut best = f64::INFINITY;
        for p in 0..b.n {
            for q in 0..b.n {
                let e0 = (b.get(p, q) - t[0]).abs();
                if e0 >= best {
                    continue;
                }
                for r in 0..b.n {
                    let e = e0.max((b.get(q, r) - t[1]).abs()).max((b.get(p, r) - t[2]).abs());
                    best = best.min(e);
                }
            }
        }
        worst = worst.max(best);
    }
    worst
}

/// Spaces with at most this many points are searched exhaustively for matching triples.
pub const EXHAUSTIVE_TRIPLES: usize = 64;

/// Lower bound on the Gromov–Hausdorff distance from three invariants that any
/// correspondence of distortion `2 d` must preserve up to `2 d`: the diameter,
/// the set of distance values and the set of distance triples. Spaces larger
/// than `budget` points are first subsampled uniformly, in which case the bound
/// applies to the subsamples. Triples are only matched against a space with at
/// most `EXHAUSTIVE_TRIPLES` points.
pub fn gh_proxy<R: Rng + ?Sized>(a: &FiniteMetric, b: &FiniteMetric, budget: usize, rng: &mut R) -> GhBound {
    let shrink = |m: &FiniteMetric, rng: &mut R| {
        if m.n > budget {
            let mut pts = sample(rng, m.n, budget).into_vec();
            pts.sort_unstable();
            m.restrict(&pts)
        } else {
            m.clone()
        }
    };
    let a = shrink(a, rng);
    let b = shrink(b, rng);
    let diameter_term = (a.diameter() - b.diameter()).abs() / 2.0;
    let (va, vb) = (a.distance_values(), b.distance_values());
    let distance_set_term = one_sided_hausdorff(&va, &vb).max(one_sided_hausdorff(&vb, &va)) / 2.0;
    let mut triple: f64 = 0.0;
    let triples = budget.min(200);
    if b.n <= EXHAUSTIVE_TRIPLES {
        triple = triple.max(triple_discrepancy(&a, &b, triples, rng));
    }
    if a.n <= EXHAUSTIVE_TRIPLES {
        triple = triple.max(triple_discrepancy(&b, &a, triples, rng));
    }
    let triple_term = triple / 2.0;
    GhBound {
        diameter_term,
        distance_set_term,
        triple_term,
        bound: diameter_term.max(distance_set_term).max(triple_term),
    }
}
