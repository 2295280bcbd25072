use rand::Rng;

use super::ContinuumError;
use crate::trees::uniform_first_passage_steps;

/// Simple walk of `m` steps of size `dx` that first reaches `-k dx = -L` at its
/// last step, read as a first-passage bridge on `[0, A]` with time step `A/m`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeBridge {
    pub perimeter: f64,
    pub area: f64,
    /// Net number of down steps; the floor has `k + 1` levels.
    pub k: usize,
    pub dx: f64,
    /// Walk heights in units of `dx`.
    pub heights: Vec<i64>,
}

impl LatticeBridge {
    pub fn m(&self) -> usize {
        self.heights.len() - 1
    }

    pub fn values(&self) -> Vec<f64> {
        self.heights.iter().map(|&h| h as f64 * self.dx).collect()
    }

    /// Time of the grid point `i`.
    pub fn time(&self, i: usize) -> f64 {
        self.area * i as f64 / self.m() as f64
    }

    /// First grid index at which the walk reaches level `-y`.
    pub fn hitting_index(&self, y: f64) -> usize {
        let level = -((y / self.dx).ceil() as i64);
        self.heights.iter().position(|&h| h <= level).unwrap_or(self.m())
    }
}

/// Number of net down steps for a walk of `m` steps of size close to `sqrt(A/m)`.
fn floor_levels(l: f64, a: f64, m: usize) -> Result<usize, ContinuumError> {
    let exact = l * (m as f64 / a).sqrt();
    let mut k = exact.round().max(1.0) as usize;
    if (m - k.min(m)) % 2 == 1 {
        k = if k > 1 && (k as f64 - exact) > 0.0 { k - 1 } else { k + 1 };
    }
    if k > m {
        return Err(ContinuumError::BadParams(format!("perimeter {l} too large for area {a} at grid {m}")));
    }
    Ok(k)
}

pub fn sample_fpb<R: Rng + ?Sized>(l: f64, a: f64, m: usize, rng: &mut R) -> Result<LatticeBridge, ContinuumError> {
    if !(l > 0.0 && a > 0.0 && l.is_finite() && a.is_finite()) {
        return Err(ContinuumError::BadParams(format!("need L, A > 0, got L={l}, A={a}")));
    }
    if m < 100 {
        return Err(ContinuumError::BadParams(format!("grid size {m} below 100")));
    }
    let k = floor_levels(l, a, m)?;
    let ups = (m - k) / 2;
    let steps = uniform_first_passage_steps(ups, ups + k, rng);
    let mut heights = Vec::with_capacity(m + 1);
    let mut h = 0i64;
    heights.push(h);
    for up in steps {
        h += if up { 1 } else { -1 };
        heights.push(h);
    }
    Ok(LatticeBridge { perimeter: l, area: a, k, dx: l / k as f64, heights })
}

/// `j_L(A)`, the density at `A` of the first hitting time of `-L` by standard Brownian motion.
pub fn first_passage_density(l: f64, a: f64) -> f64 {
    if a <= 0.0 {
        return 0.0;
    }
    l / (2.0 * std::f64::consts::PI * a.powi(3)).sqrt() * (-l * l / (2.0 * a)).exp()
}
