use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::LatticeBridge;

/// A first-passage bridge `X` together with its label process `Z` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SnakeField {
    pub perimeter: f64,
    pub area: f64,
    pub x: Vec<f64>,
    /// Minimum of the underlying path of `x` over each grid cell `[i, i+1]`.
    pub x_cell: Vec<f64>,
    /// Running infimum of `x`.
    pub x_low: Vec<f64>,
    /// Snake head driven by `x - x_low`.
    pub z0: Vec<f64>,
    /// Floor bridge at the levels `j * dx`, `j = 0..=k`.
    pub b: Vec<f64>,
    /// Floor level `T^{-1}` of each grid point, in units of `dx`.
    pub floor: Vec<usize>,
    pub z: Vec<f64>,
    /// Minimum of the underlying path of `z` over each grid cell.
    pub z_cell: Vec<f64>,
    pub dx: f64,
}

fn cell_min(v: &[f64]) -> Vec<f64> {
    v.windows(2).map(|w| w[0].min(w[1])).collect()
}

/// Minimum over the cells `lo..hi`, or `v[lo]` when the range is empty.
fn range_min(v: &[f64], cells: &[f64], lo: usize, hi: usize) -> f64 {
    cells[lo..hi].iter().copied().fold(v[lo], f64::min)
}

fn running_min(x: &[f64]) -> Vec<f64> {
    let mut cur = f64::INFINITY;
    x.iter()
        .map(|&v| {
            cur = cur.min(v);
            cur
        })
        .collect()
}

/// Exact Gaussian sampling of `Z` given the lattice bridge.
///
/// Along the walk, the head of the snake is a stack of values, one per unit of
/// height of `x - x_low`: an up step pushes an independent `N(0, dx)` increment,
/// a down step pops. Two grid points then share exactly `min (x - x_low) / dx`
/// stack entries. The floor bridge is a Gaussian walk on `k` levels pinned at
/// both ends.
pub fn sample_snake<R: Rng + ?Sized>(bridge: &LatticeBridge, rng: &mut R) -> SnakeField {
    let h = &bridge.heights;
    let m = bridge.m();
    let sd = bridge.dx.sqrt();
    let mut z0 = vec![0.0; m + 1];
    let mut floor = vec![0usize; m + 1];
    let mut stack: Vec<f64> = Vec::new();
    let mut low = 0i64;
    for i in 1..=m {
        if h[i] > h[i - 1] {
            let top = stack.last().copied().unwrap_or(0.0);
            let g: f64 = StandardNormal.sample(rng);
            stack.push(top + sd * g);
        } else if h[i - 1] > low {
            stack.pop();
        } else {
            low = h[i];
        }
        z0[i] = stack.last().copied().unwrap_or(0.0);
        floor[i] = (-low) as usize;
    }
    let k = bridge.k;
    let mut w = vec![0.0; k + 1];
    for j in 1..=k {
        let g: f64 = StandardNormal.sample(rng);
        w[j] = w[j - 1] + sd * g;
    }
    let wk = w[k];
    let b: Vec<f64> = w.iter().enumerate().map(|(j, &v)| v - j as f64 / k as f64 * wk).collect();
    let s3 = 3f64.sqrt();
    let z: Vec<f64> = (0..=m).map(|i| z0[i] + s3 * b[floor[i]]).collect();
    let x = bridge.values();
    SnakeField {
        perimeter: bridge.perimeter,
        area: bridge.area,
        x_low: running_min(&x),
        x_cell: cell_min(&x),
        x,
        z0,
        b,
        floor,
        z_cell: cell_min(&z),
        z,
        dx: bridge.dx,
    }
}

impl SnakeField {
    pub fn m(&self) -> usize {
        self.x.len() - 1
    }

    /// `d_X(i, j) = X_i + X_j - 2 min_{[i, j]} X`.
    pub fn d_x(&self, i: usize, j: usize) -> f64 {
        let (i, j) = (i.min(j), i.max(j));
        self.x[i] + self.x[j] - 2.0 * range_min(&self.x, &self.x_cell, i, j)
    }

    /// `d_Z` with minima taken over both directed arcs of the circle `[0, A]`.
    pub fn d_z(&self, i: usize, j: usize) -> f64 {
        let (i, j) = (i.min(j), i.max(j));
        let inner = range_min(&self.z, &self.z_cell, i, j);
        let outer = range_min(&self.z, &self.z_cell, j, self.m()).min(range_min(&self.z, &self.z_cell, 0, i));
        self.z[i] + self.z[j] - 2.0 * inner.max(outer)
    }

    /// `d_Z` with the minimum over `[i, j]` only (the slice version).
    pub fn d_z_linear(&self, i: usize, j: usize) -> f64 {
        let (i, j) = (i.min(j), i.max(j));
        self.z[i] + self.z[j] - 2.0 * range_min(&self.z, &self.z_cell, i, j)
    }

    /// Grid index of the minimum of `Z` (first one on ties).
    pub fn star_index(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.z.iter().enumerate() {
            if v < self.z[best] {
                best = i;
            }
        }
        best
    }

    /// Maximal intervals `[a, b]` with `X - X_low > 0` strictly inside and `= 0` at both ends.
    pub fn excursions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut start = None;
        for i in 0..=self.m() {
            let on_floor = self.x[i] <= self.x_low[i];
            match (on_floor, start) {
                (false, None) => start = Some(i - 1),
                (true, Some(a)) => {
                    out.push((a, i));
                    start = None;
                }
                _ => {}
            }
        }
        out
    }

    /// Largest increment of `Z` between neighbouring grid points.
    pub fn modulus(&self) -> f64 {
        self.z.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max)
    }

    /// Every `factor`-th grid point of the same field, keeping exact cell minima.
    pub fn coarsen(&self, factor: usize) -> SnakeField {
        let pick = |v: &[f64]| v.iter().step_by(factor).copied().collect::<Vec<_>>();
        let merge = |c: &[f64]| c.chunks(factor).map(|w| w.iter().copied().fold(f64::INFINITY, f64::min)).collect();
        assert_eq!(self.m() % factor, 0, "grid size must be a multiple of the factor");
        let x = pick(&self.x);
        SnakeField {
            perimeter: self.perimeter,
            area: self.area,
            x_low: running_min(&x),
            x_cell: merge(&self.x_cell),
            z_cell: merge(&self.z_cell),
            x,
            z0: pick(&self.z0),
            b: self.b.clone(),
            floor: self.floor.iter().step_by(factor).copied().collect(),
            z: pick(&self.z),
            dx: self.dx,
        }
    }

    /// The field of the scaled pair `(lambda^{1/2} X_{s/lambda}, lambda^{1/4} Z_{s/lambda})`.
    pub fn scaled(&self, lambda: f64) -> SnakeField {
        let sx = lambda.sqrt();
        let sz = lambda.powf(0.25);
        let mul = |v: &[f64], c: f64| v.iter().map(|&t| t * c).collect::<Vec<_>>();
        SnakeField {
            perimeter: self.perimeter * sx,
            area: self.area * lambda,
            x: mul(&self.x, sx),
            x_cell: mul(&self.x_cell, sx),
            z_cell: mul(&self.z_cell, sz),
            x_low: mul(&self.x_low, sx),
            z0: mul(&self.z0, sz),
            b: mul(&self.b, sz),
            floor: self.floor.clone(),
            z: mul(&self.z, sz),
            dx: self.dx * sx,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuum::sample_fpb;
    use crate::util::stream_rng;

    fn field(seed: u64, m: usize) -> SnakeField {
        let mut rng = stream_rng(seed, 0);
        let b = sample_fpb(1.0, 1.0, m, &mut rng).unwrap();
        sample_snake(&b, &mut rng)
    }

    #[test]
    fn pinned_endpoints_and_floor_labels() {
        let f = field(1, 2048);
        let m = f.m();
        assert_eq!(f.z[0], 0.0);
        assert!(f.z[m].abs() < 1e-12);
        assert_eq!(f.floor[m], f.b.len() - 1);
        for i in 0..=m {
            assert!((f.x_low[i] + f.floor[i] as f64 * f.dx).abs() < 1e-12);
            if f.x[i] == f.x_low[i] {
                assert_eq!(f.z0[i], 0.0);
                assert!((f.z[i] - 3f64.sqrt() * f.b[f.floor[i]]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn labels_are_class_functions() {
        let f = field(2, 1000);
        for i in 0..=f.m() {
            for j in i..=f.m() {
                if f.d_x(i, j) == 0.0 {
                    assert_eq!(f.z[i], f.z[j], "{i} {j}");
                }
            }
        }
    }

    /// Conditional on X, the head has variance `X - X_low`; check by refreshing
    /// the Gaussian part on a fixed bridge.
    #[test]
    fn head_variance_matches_height() {
        let mut rng = stream_rng(3, 0);
        let bridge = sample_fpb(1.0, 1.0, 400, &mut rng).unwrap();
        let reps = 20_000;
        let probes = [37usize, 150, 222, 399];
        let mut s2 = [0.0; 4];
        let mut cross = 0.0;
        for _ in 0..reps {
            let f = sample_snake(&bridge, &mut rng);
            for (k, &p) in probes.iter().enumerate() {
                s2[k] += f.z0[p] * f.z0[p];
            }
            cross += f.z0[150] * f.z0[222];
        }
        let x = bridge.values();
        let low = running_min(&x);
        for (k, &p) in probes.iter().enumerate() {
            let var = x[p] - low[p];
            let se = (2.0 * var * var / reps as f64).sqrt().max(1e-12);
            assert!((s2[k] / reps as f64 - var).abs() < 4.0 * se, "var at {p}");
        }
        let shared = (150..=222).map(|u| x[u] - low[u]).fold(f64::INFINITY, f64::min);
        let got = cross / reps as f64;
        let v1 = x[150] - low[150];
        let v2 = x[222] - low[222];
        let se = ((v1 * v2 + shared * shared) / reps as f64).sqrt();
        assert!((got - shared).abs() < 4.0 * se + 1e-12, "{got} vs {shared}");
    }

    #[test]
    fn floor_bridge_covariance() {
        let mut rng = stream_rng(4, 0);
        let bridge = sample_fpb(1.0, 1.0, 400, &mut rng).unwrap();
        let k = bridge.k;
        let (a, b) = (k / 4, 2 * k / 3);
        let (ya, yb) = (a as f64 * bridge.dx, b as f64 * bridge.dx);
        let reps = 20_000;
        let mut c = 0.0;
        for _ in 0..reps {
            let f = sample_snake(&bridge, &mut rng);
            c += f.b[a] * f.b[b];
        }
        let expect = ya * (1.0 - yb);
        let se = ((ya * (1.0 - ya) * yb * (1.0 - yb) + expect * expect) / reps as f64).sqrt();
        assert!((c / reps as f64 - expect).abs() < 4.0 * se);
    }

    /// `Cov(Z_s, Z_t) = inf_{[s,t]} X - X_low(t) - 3 X_low(s) (L + X_low(t)) / L` for `s <= t`.
    #[test]
    fn full_label_covariance() {
        let mut rng = stream_rng(6, 0);
        let bridge = sample_fpb(1.0, 1.0, 400, &mut rng).unwrap();
        let x = bridge.values();
        let low = running_min(&x);
        let pairs = [(10usize, 60usize), (100, 300), (50, 51), (200, 390), (5, 395)];
        let reps = 20_000;
        let mut acc = [0.0; 5];
        let mut sq = [(0.0, 0.0); 5];
        for _ in 0..reps {
            let f = sample_snake(&bridge, &mut rng);
            for (k, &(s, t)) in pairs.iter().enumerate() {
                acc[k] += f.z[s] * f.z[t];
                sq[k].0 += f.z[s] * f.z[s];
                sq[k].1 += f.z[t] * f.z[t];
            }
        }
        for (k, &(s, t)) in pairs.iter().enumerate() {
            let inf = (s..=t).map(|u| x[u]).fold(f64::INFINITY, f64::min);
            let expect = inf - low[t] - 3.0 * low[s] * (1.0 + low[t]);
            let got = acc[k] / reps as f64;
            let vs = sq[k].0 / reps as f64;
            let vt = sq[k].1 / reps as f64;
            let se = ((vs * vt + got * got) / reps as f64).sqrt();
            assert!((got - expect).abs() < 4.0 * se + 1e-9, "pair {s},{t}: {got} vs {expect}");
        }
    }
}
