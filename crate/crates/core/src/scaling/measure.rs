use std::collections::VecDeque;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{Model, ScalingError};
use crate::stats::{ks_two_sample_weighted, linear_fit, quantile, Ks};
use crate::map::NONE;
use crate::util::stream_rng;

/// Distances read off one sampled map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MapMeasure {
    /// `d(u, v)` for independent uniform vertices.
    pub d_uv: u32,
    /// `d(v_*, u)`, from the labels.
    pub d_star: u32,
    /// Double-sweep lower bound on the diameter.
    pub diam: u32,
    pub vertices: usize,
    pub weight: f64,
}

/// Samples `samples` maps of size `n`; sample `i` uses stream `(stream << 32) | i`
/// of `seed`, so results do not depend on the thread count.
pub fn measure_maps(
    model: &Model,
    n: u64,
    samples: usize,
    seed: u64,
    stream: u64,
) -> Result<(usize, Vec<MapMeasure>), ScalingError> {
    let l = model.perimeter_for(n)?.l;
    let out = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, (stream << 32) | i);
            let s = model.sample(l, n, &mut rng)?;
            let pm = &s.pointed;
            let nv = pm.map.num_vertices() as u32;
            let u = rng.random_range(0..nv);
            let v = rng.random_range(0..nv);
            let mut dist = Vec::new();
            let mut queue = VecDeque::new();
            pm.map.bfs_into(u, &mut dist, &mut queue).map_err(|e| ScalingError::Invariant(e.to_string()))?;
            let d_uv = dist[v as usize];
            let far = (0..nv).max_by_key(|&w| (dist[w as usize], std::cmp::Reverse(w))).unwrap_or(0);
            let d_star = (pm.labels[u as usize] - pm.labels[pm.star as usize]) as u32;
            if d_uv == NONE || dist[pm.star as usize] != d_star {
                return Err(ScalingError::Invariant(format!("distance identity failed at sample {i}")));
            }
            pm.map.bfs_into(far, &mut dist, &mut queue).map_err(|e| ScalingError::Invariant(e.to_string()))?;
            let diam = dist.iter().copied().max().unwrap_or(0);
            Ok(MapMeasure { d_uv, d_star, diam, vertices: nv as usize, weight: s.weight })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((l, out))
}

/// Weighted sample of raw distances together with the distance scale at `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPoint {
    pub n: u64,
    pub l: usize,
    pub scale: f64,
    /// `(distance, weight)` pairs.
    pub raw: Vec<(u32, f64)>,
}

impl TwoPoint {
    pub fn rescaled(&self) -> Vec<(f64, f64)> {
        self.rescaled_by(self.scale)
    }

    pub fn rescaled_by(&self, scale: f64) -> Vec<(f64, f64)> {
        self.raw.iter().map(|&(d, w)| (d as f64 / scale, w)).collect()
    }
}

/// Rescaled law of `d(u, v)`, or of `d(v_*, u)` when `from_star` is set.
/// Both carry the de-pointing weight, so they target the same unpointed law.
pub fn two_point(model: &Model, n: u64, samples: usize, seed: u64, from_star: bool) -> Result<TwoPoint, ScalingError> {
    let (l, ms) = measure_maps(model, n, samples, seed, 0)?;
    let raw = ms.iter().map(|m| (if from_star { m.d_star } else { m.d_uv }, m.weight)).collect();
    Ok(TwoPoint { n, l, scale: model.scaling_constant(n), raw })
}

pub fn weighted_mean(xs: &[(f64, f64)]) -> f64 {
    let w: f64 = xs.iter().map(|p| p.1).sum();
    xs.iter().map(|p| p.0 * p.1).sum::<f64>() / w
}

/// Smallest `x` whose weighted CDF reaches `p`.
pub fn weighted_quantile(xs: &[(f64, f64)], p: f64) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = v.iter().map(|q| q.1).sum();
    let mut acc = 0.0;
    for &(x, w) in &v {
        acc += w;
        if acc >= p * total * (1.0 - 1e-12) {
            return x;
        }
    }
    v.last().map_or(f64::NAN, |q| q.0)
}

/// Mean diameter at one size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizePoint {
    pub n: u64,
    pub l: usize,
    pub mean_diameter: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// Central 95% bootstrap interval of the slope.
    pub ci: (f64, f64),
    pub points: Vec<SizePoint>,
    pub seed: u64,
}

const BOOTSTRAP_ROUNDS: usize = 200;

fn fit_from_diameters(sizes: &[u64], diams: &[Vec<(f64, f64)>]) -> (f64, f64) {
    let x: Vec<f64> = sizes.iter().map(|&n| (n as f64).ln()).collect();
    let y: Vec<f64> = diams.iter().map(|d| weighted_mean(d).ln()).collect();
    linear_fit(&x, &y)
}

/// Least-squares slope of `log E[diam]` against `log n`, with a bootstrap
/// interval obtained by resampling maps within each size.
pub fn diameter_exponent(model: &Model, sizes: &[u64], samples: usize, seed: u64) -> Result<ExponentFit, ScalingError> {
    if sizes.len() < 4 {
        return Err(ScalingError::InsufficientSizes(sizes.len()));
    }
    let mut diams = Vec::new();
    let mut points = Vec::new();
    for (k, &n) in sizes.iter().enumerate() {
        let (l, ms) = measure_maps(model, n, samples, seed, k as u64)?;
        let d: Vec<(f64, f64)> = ms.iter().map(|m| (m.diam as f64, m.weight)).collect();
        points.push(SizePoint { n, l, mean_diameter: weighted_mean(&d), samples });
        diams.push(d);
    }
    Ok(fit_with_bootstrap(sizes, &diams, points, seed))
}

/// Exponent fit from per-size `(diameter, weight)` samples.
pub(super) fn fit_with_bootstrap(sizes: &[u64], diams: &[Vec<(f64, f64)>], points: Vec<SizePoint>, seed: u64) -> ExponentFit {
    let (slope, intercept) = fit_from_diameters(sizes, diams);
    let mut rng = stream_rng(seed, u64::MAX);
    let mut boot: Vec<f64> = (0..BOOTSTRAP_ROUNDS)
        .map(|_| {
            let resampled: Vec<Vec<(f64, f64)>> = diams
                .iter()
                .map(|d| (0..d.len()).map(|_| d[rng.random_range(0..d.len())]).collect())
                .collect();
            fit_from_diameters(sizes, &resampled).0
        })
        .collect();
    boot.sort_by(f64::total_cmp);
    let ci = (quantile(&boot, 0.025), quantile(&boot, 0.975));
    ExponentFit { slope, intercept, ci, points, seed }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantileGap {
    pub p: f64,
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniversalityReport {
    pub ks: f64,
    pub p_value: f64,
    pub gaps: Vec<QuantileGap>,
    pub samples: (usize, usize),
}

pub const GAP_LEVELS: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];

/// KS distance and per-quantile gaps between two weighted rescaled samples.
pub fn universality_compare(a: &[(f64, f64)], b: &[(f64, f64)]) -> UniversalityReport {
    let Ks { statistic, p_value } = ks_two_sample_weighted(a, b);
    let gaps = GAP_LEVELS
        .iter()
        .map(|&p| QuantileGap { p, a: weighted_quantile(a, p), b: weighted_quantile(b, p) })
        .collect();
    UniversalityReport { ks: statistic, p_value, gaps, samples: (a.len(), b.len()) }
}
