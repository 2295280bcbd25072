use rand::Rng;
use serde::Serialize;

use super::{ContinuumError, SnakeField};

/// Largest number of identification classes handled by the quotient construction.
pub const MAX_CLASSES: usize = 4096;

/// Quotient pseudo-metric on a grid segment: classes of glued points and the
/// shortest-path metric between them.
#[derive(Debug, Clone, PartialEq)]
pub struct Quotient {
    /// First grid index covered.
    pub offset: usize,
    /// Class of each grid index of the segment.
    pub class_of: Vec<u32>,
    /// Smallest grid index of each class.
    pub reps: Vec<usize>,
    /// Row-major distance matrix between classes.
    pub dist: Vec<f64>,
}

impl Quotient {
    pub fn num_classes(&self) -> usize {
        self.reps.len()
    }

    pub fn class_distance(&self, a: usize, b: usize) -> f64 {
        self.dist[a * self.reps.len() + b]
    }

    /// Distance between grid indices (absolute, not relative to the segment).
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let a = self.class_of[i - self.offset] as usize;
        let b = self.class_of[j - self.offset] as usize;
        self.class_distance(a, b)
    }

    /// Largest violation of symmetry, zero diagonal and the triangle inequality.
    /// All triples are examined when there are at most 400 classes, otherwise
    /// `samples` random triples.
    pub fn axiom_defect<R: Rng + ?Sized>(&self, samples: usize, rng: &mut R) -> f64 {
        let k = self.reps.len();
        let d = |a: usize, b: usize| self.dist[a * k + b];
        let mut worst: f64 = 0.0;
        for a in 0..k {
            worst = worst.max(d(a, a).abs());
            for b in 0..a {
                worst = worst.max((d(a, b) - d(b, a)).abs());
            }
        }
        let mut check = |a: usize, b: usize, c: usize| {
            worst = worst.max(d(a, c) - d(a, b) - d(b, c));
        };
        if k <= 400 {
            for a in 0..k {
                for b in 0..k {
                    for c in 0..k {
                        check(a, b, c);
                    }
                }
            }
        } else {
            for _ in 0..samples {
                check(rng.random_range(0..k), rng.random_range(0..k), rng.random_range(0..k));
            }
        }
        worst
    }
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn find(&mut self, mut a: u32) -> u32 {
        while self.0[a as usize] != a {
            let p = self.0[a as usize];
            self.0[a as usize] = self.0[p as usize];
            a = p;
        }
        a
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi as usize] = lo;
        }
    }
}

/// Glues grid points with `d_X <= eps`, joins classes by the smallest `d_Z`
/// between their members, and closes the result under shortest paths.
/// `cyclic` selects the circular arc convention of the disk; otherwise labels
/// are compared along `[i, j]` only (the slice convention).
///
/// `xc` and `zc` hold the minima of the paths over each grid cell.
fn quotient(
    (x, xc): (&[f64], &[f64]),
    (z, zc): (&[f64], &[f64]),
    offset: usize,
    eps: f64,
    cyclic: bool,
) -> Result<Quotient, ContinuumError> {
    let n = x.len();
    let mut uf = UnionFind((0..n as u32).collect());
    for i in 0..n {
        let mut lo = x[i];
        for j in i + 1..n {
            lo = lo.min(xc[j - 1]);
            if x[i] + x[j] - 2.0 * lo <= eps {
                uf.union(i as u32, j as u32);
            }
        }
    }
    let mut class_of = vec![u32::MAX; n];
    let mut reps = Vec::new();
    for i in 0..n {
        let r = uf.find(i as u32) as usize;
        if class_of[r] == u32::MAX {
            class_of[r] = reps.len() as u32;
            reps.push(i);
        }
        class_of[i] = class_of[r];
    }
    let k = reps.len();
    if k > MAX_CLASSES {
        return Err(ContinuumError::GridTooLarge { classes: k, cap: MAX_CLASSES });
    }
    // minima over [j, end] and [0, i]
    let mut suffix_min = vec![z[n - 1]; n];
    for j in (0..n - 1).rev() {
        suffix_min[j] = suffix_min[j + 1].min(zc[j]);
    }
    let mut dist = vec![f64::INFINITY; k * k];
    let mut prefix_min = z[0];
    for i in 0..n {
        if i > 0 {
            prefix_min = prefix_min.min(zc[i - 1]);
        }
        let ci = class_of[i] as usize;
        let mut inner = z[i];
        for j in i..n {
            if j > i {
                inner = inner.min(zc[j - 1]);
            }
            let arc = if cyclic { inner.max(suffix_min[j].min(prefix_min)) } else { inner };
            let w = z[i] + z[j] - 2.0 * arc;
            let cj = class_of[j] as usize;
            let slot = &mut dist[ci * k + cj];
            if w < *slot {
                *slot = w;
                dist[cj * k + ci] = w;
            }
        }
    }
    for a in 0..k {
        dist[a * k + a] = 0.0;
    }
    floyd_warshall(&mut dist, k);
    Ok(Quotient { offset, class_of, reps, dist })
}

fn floyd_warshall(d: &mut [f64], k: usize) {
    let mut row_m = vec![0.0; k];
    for m in 0..k {
        row_m.copy_from_slice(&d[m * k..(m + 1) * k]);
        for a in 0..k {
            let dam = d[a * k + m];
            if !dam.is_finite() {
                continue;
            }
            let row = &mut d[a * k..(a + 1) * k];
            for (x, &y) in row.iter_mut().zip(&row_m) {
                let c = dam + y;
                if c < *x {
                    *x = c;
                }
            }
        }
    }
}

/// Grid approximation of the Brownian disk with the quotient metric `D*`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskApprox {
    pub field: SnakeField,
    pub eps_glue: f64,
    pub metric: Quotient,
    /// Grid indices on the floor, in order of `T^{-1}`.
    pub boundary: Vec<usize>,
    pub star_index: usize,
}

/// Default gluing slack `2 A / m`.
pub fn default_eps_glue(area: f64, m: usize) -> f64 {
    2.0 * area / m as f64
}

pub fn compute_dstar(field: SnakeField, eps_glue: f64) -> Result<DiskApprox, ContinuumError> {
    let metric = quotient((&field.x, &field.x_cell), (&field.z, &field.z_cell), 0, eps_glue, true)?;
    let boundary = boundary_indices(&field, eps_glue);
    let star_index = field.star_index();
    Ok(DiskApprox { field, eps_glue, metric, boundary, star_index })
}

fn boundary_indices(field: &SnakeField, eps: f64) -> Vec<usize> {
    (0..=field.m()).filter(|&i| field.x[i] - field.x_low[i] <= eps).collect()
}

/// Slice metric `D~*` on one excursion `[a, b]` of `X - X_low`.
pub fn compute_dtilde_star(field: &SnakeField, a: usize, b: usize, eps_glue: f64) -> Result<Quotient, ContinuumError> {
    let ok = a < b
        && b <= field.m()
        && field.x[a] == field.x_low[a]
        && field.x[b] == field.x_low[b]
        && (a + 1..b).all(|i| field.x[i] > field.x_low[i]);
    if !ok {
        return Err(ContinuumError::NotAnExcursion { a, b });
    }
    quotient((&field.x[a..=b], &field.x_cell[a..b]), (&field.z[a..=b], &field.z_cell[a..b]), a, eps_glue, false)
}

impl DiskApprox {
    pub fn dstar(&self, i: usize, j: usize) -> f64 {
        self.metric.distance(i, j)
    }

    /// Boundary grid indices ordered by `T^{-1}`.
    pub fn boundary_param(&self) -> &[usize] {
        &self.boundary
    }

    /// Boundary measure: the floor levels visited, times the level spacing.
    pub fn boundary_length(&self) -> f64 {
        self.boundary.last().map_or(0.0, |&i| self.field.floor[i] as f64 * self.field.dx)
    }

    /// Grid tolerance for metric identities: four times the largest label increment.
    pub fn tau(&self) -> f64 {
        4.0 * self.field.modulus()
    }

    /// Largest `|D*(s, s_*) - (Z_s - min Z)|` over class representatives.
    pub fn star_identity_defect(&self) -> Vec<f64> {
        let zmin = self.field.z[self.star_index];
        self.metric.reps.iter().map(|&r| (self.dstar(r, self.star_index) - (self.field.z[r] - zmin)).abs()).collect()
    }

    /// Mass of each class under the push-forward of Lebesgue measure on `[0, A]`.
    pub fn class_masses(&self) -> Vec<f64> {
        let m = self.field.m();
        let cell = self.field.area / m as f64;
        let mut mass = vec![0.0; self.metric.num_classes()];
        for i in 0..m {
            // each grid cell is split between its two endpoints
            mass[self.metric.class_of[i] as usize] += cell / 2.0;
            mass[self.metric.class_of[i + 1] as usize] += cell / 2.0;
        }
        mass
    }

    /// Largest distance between class representatives.
    pub fn diameter(&self) -> f64 {
        self.metric.dist.iter().copied().fold(0.0, f64::max)
    }

    /// `i,j,dstar` rows over pairs of representatives with `i <= j`.
    pub fn to_csv(&self) -> String {
        let reps = &self.metric.reps;
        let mut out = String::from("i,j,dstar\n");
        for (a, &ra) in reps.iter().enumerate() {
            for (b, &rb) in reps.iter().enumerate().skip(a) {
                out.push_str(&format!("{ra},{rb},{}\n", self.metric.class_distance(a, b)));
            }
        }
        out
    }

    pub fn metadata(&self, seed: u64) -> DiskMetadata {
        DiskMetadata {
            perimeter: self.field.perimeter,
            area: self.field.area,
            m: self.field.m(),
            eps_glue: self.eps_glue,
            seed,
            classes: self.metric.num_classes(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiskMetadata {
    #[serde(rename = "L")]
    pub perimeter: f64,
    #[serde(rename = "A")]
    pub area: f64,
    pub m: usize,
    pub eps_glue: f64,
    pub seed: u64,
    pub classes: usize,
}
