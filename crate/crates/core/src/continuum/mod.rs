//! Desk-scale Brownian disks: lattice first-passage bridges, the label field
//! built on top of them, and the quotient pseudo-metrics `D*` and `D~*`.

mod fpb;
mod metric;
mod snake;

use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use fpb::{first_passage_density, sample_fpb, LatticeBridge};
pub use metric::{
    compute_dstar, compute_dtilde_star, default_eps_glue, DiskApprox, DiskMetadata, Quotient, MAX_CLASSES,
};
pub use snake::{sample_snake, SnakeField};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContinuumError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("{classes} identification classes exceed the cap of {cap}")]
    GridTooLarge { classes: usize, cap: usize },
    #[error("[{a}, {b}] is not an excursion interval")]
    NotAnExcursion { a: usize, b: usize },
}

/// Area law of a free Brownian disk with unit perimeter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AreaKind {
    /// Density `(2 pi A^3)^{-1/2} exp(-1/(2A))`.
    Pointed,
    /// Density `(2 pi A^5)^{-1/2} exp(-1/(2A))`.
    Free,
}

/// `A* = 1/N^2` for a standard Gaussian `N`; `A = 1/G` with `G` chi-square with
/// three degrees of freedom.
pub fn sample_area_law<R: Rng + ?Sized>(kind: AreaKind, rng: &mut R) -> f64 {
    match kind {
        AreaKind::Pointed => {
            let n: f64 = StandardNormal.sample(rng);
            1.0 / (n * n)
        }
        AreaKind::Free => 1.0 / ChiSquared::new(3.0).expect("positive dof").sample(rng),
    }
}

/// Density of the area law.
pub fn area_density(kind: AreaKind, a: f64) -> f64 {
    if a <= 0.0 {
        return 0.0;
    }
    let p = match kind {
        AreaKind::Pointed => 3,
        AreaKind::Free => 5,
    };
    (2.0 * std::f64::consts::PI * a.powi(p)).sqrt().recip() * (-1.0 / (2.0 * a)).exp()
}

/// Cumulative distribution of the pointed area law: `P(1/N^2 <= a) = 2 (1 - Phi(1/sqrt a))`.
pub fn pointed_area_cdf(a: f64) -> f64 {
    if a <= 0.0 {
        return 0.0;
    }
    statrs::function::erf::erfc(1.0 / (2.0 * a).sqrt())
}

/// Full pipeline for `BD_{L, A}` on a grid of `m` steps.
pub fn brownian_disk<R: Rng + ?Sized>(l: f64, a: f64, m: usize, rng: &mut R) -> Result<DiskApprox, ContinuumError> {
    let bridge = sample_fpb(l, a, m, rng)?;
    let field = sample_snake(&bridge, rng);
    compute_dstar(field, default_eps_glue(a, m))
}

/// Free (or free pointed) Brownian disk with perimeter `L`: area `L^2` times a draw of the area law.
pub fn free_disk<R: Rng + ?Sized>(l: f64, kind: AreaKind, m: usize, rng: &mut R) -> Result<DiskApprox, ContinuumError> {
    let a = l * l * sample_area_law(kind, rng);
    brownian_disk(l, a, m, rng)
}

#[cfg(test)]
mod tests;
