use rayon::prelude::*;
use serde::Serialize;

use super::{LRule, Model, ScalingError};
use crate::boltzmann::{
    condition_on_size, depth_first_colors, sample_forest_sizes, BoltzmannModel, ConditionMethod, SizeSymbol,
};
use crate::continuum::{pointed_area_cdf, sample_fpb, sample_snake};
use crate::stats::{ks_one_sample, ks_two_sample, mean};
use crate::trees::mobile_encoding;
use crate::util::stream_rng;

const MAX_TRIES: u64 = 1 << 40;

/// Times at which marginals are compared.
pub const TIMES: [f64; 3] = [0.25, 0.5, 0.75];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginalKs {
    pub process: &'static str,
    pub t: f64,
    pub ks: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EncodingReport {
    pub n: u64,
    pub l: usize,
    pub samples: usize,
    pub seed: u64,
    pub marginals: Vec<MarginalKs>,
    /// Mean of `Upsilon(N^E) / sqrt n` against `sigma_S L`.
    pub upsilon_terminal: f64,
    pub upsilon_target: f64,
    /// Mean of `Lambda^S(N^E) / N^E` against `a_S`.
    pub lambda_ratio: f64,
    pub a_s: f64,
    /// Mean of `|l(last white corner)| / n^{1/4}`.
    pub terminal_label: f64,
}

impl EncodingReport {
    pub fn upsilon_rel_err(&self) -> f64 {
        (self.upsilon_terminal / self.upsilon_target - 1.0).abs()
    }

    pub fn lambda_rel_err(&self) -> f64 {
        (self.lambda_ratio / self.a_s - 1.0).abs()
    }

    pub fn max_ks(&self) -> f64 {
        self.marginals.iter().map(|m| m.ks).fold(0.0, f64::max)
    }
}

fn boltzmann(model: &Model) -> Result<&BoltzmannModel, ScalingError> {
    model.boltzmann.as_ref().ok_or(ScalingError::NeedsBoltzmann)
}

/// Values of the three rescaled processes at `TIMES`, flattened process-major.
type Marginals = [f64; 9];

/// Compares the rescaled white contour, tree counter and label processes of
/// conditioned mobiles with the first-passage bridge and snake at unit area,
/// simulated on a grid of `grid` steps.
pub fn encoding_limit_check(
    model: &Model,
    n: u64,
    samples: usize,
    grid: usize,
    seed: u64,
) -> Result<EncodingReport, ScalingError> {
    let bm = boltzmann(model)?;
    let s = model.symbol;
    let l = model.perimeter_for(n)?.l;
    let sigma = model.sigma2.sqrt();
    let a_s = bm.critical.a.get(s);
    let sigma_q = bm.critical.sigma_q2.sqrt();
    let perimeter = match model.spec.l_rule {
        LRule::Scaled { perimeter } => perimeter,
        _ => l as f64 / (sigma * (n as f64).sqrt()),
    };
    let sqrt_n = (n as f64).sqrt();
    let quart_n = sqrt_n.sqrt();

    let discrete = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            let mf = condition_on_size(&bm.laws, l, s, n, ConditionMethod::Exact, MAX_TRIES, &mut rng)?;
            let e = mobile_encoding(&mf);
            let ne = e.white_contour.len();
            let mut out = [0.0; 9];
            for (k, &t) in TIMES.iter().enumerate() {
                let idx = ((ne as f64 * t) as usize).min(ne - 1);
                out[k] = e.white_contour[idx] as f64 / sqrt_n;
                out[3 + k] = e.white_upsilon[idx] as f64 / sqrt_n;
                out[6 + k] = e.white_labels[idx] as f64 / quart_n;
            }
            let ns = match s {
                SizeSymbol::V => mf.n_white(),
                SizeSymbol::E => ne,
                SizeSymbol::F => mf.n_black(),
            };
            let last = e.white_labels[ne - 1] as f64 / quart_n;
            Ok((out, ns as f64 / ne as f64, last.abs()))
        })
        .collect::<Result<Vec<(Marginals, f64, f64)>, ScalingError>>()?;

    // continuum side at the effective perimeter l / (sigma_S sqrt n)
    let l_eff = l as f64 / (sigma * sqrt_n);
    let c_contour = 1.0 / (a_s.sqrt() * sigma_q);
    let c_label = (2.0 * sigma / 3.0).sqrt();
    let continuum = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, (1 << 32) | i);
            let bridge = sample_fpb(l_eff, 1.0, grid, &mut rng)?;
            let f = sample_snake(&bridge, &mut rng);
            let mut out = [0.0; 9];
            for (k, &t) in TIMES.iter().enumerate() {
                let idx = (t * f.m() as f64).round() as usize;
                out[k] = c_contour * (f.x[idx] - f.x_low[idx]);
                out[3 + k] = -sigma * f.x_low[idx];
                out[6 + k] = c_label * f.z[idx];
            }
            Ok(out)
        })
        .collect::<Result<Vec<Marginals>, ScalingError>>()?;

    let names = ["contour", "upsilon", "label"];
    let mut marginals = Vec::new();
    for (p, name) in names.iter().enumerate() {
        for (k, &t) in TIMES.iter().enumerate() {
            let a: Vec<f64> = discrete.iter().map(|d| d.0[3 * p + k]).collect();
            let b: Vec<f64> = continuum.iter().map(|c| c[3 * p + k]).collect();
            let ks = ks_two_sample(&a, &b);
            marginals.push(MarginalKs { process: name, t, ks: ks.statistic, p_value: ks.p_value });
        }
    }
    let ratios: Vec<f64> = discrete.iter().map(|d| d.1).collect();
    let lasts: Vec<f64> = discrete.iter().map(|d| d.2).collect();
    Ok(EncodingReport {
        n,
        l,
        samples,
        seed,
        marginals,
        // every tree has been explored once the last corner is passed
        upsilon_terminal: l as f64 / sqrt_n,
        upsilon_target: sigma * perimeter,
        lambda_ratio: mean(&ratios),
        a_s,
        terminal_label: mean(&lasts),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerimeterRow {
    pub l: usize,
    pub samples: usize,
    pub seed: u64,
    /// KS distance of `|V| / l^2` from the law of `A* / sigma_V^2`.
    pub ks: f64,
    pub p_value: f64,
    /// Mean of `l^2 / (sigma_V^2 |V|)`, tending to `E[1/A*] = 1`.
    pub inverse_moment: f64,
    /// `K_l / l^2 = 1 / (l^2 E[1/|V|])`, tending to `1 / sigma_V^2`.
    pub k_over_l2: f64,
    pub k_target: f64,
}

/// Vertex counts of pointed Boltzmann maps of perimeter `2l`, one row per `l`.
pub fn boltzmann_perimeter_law(
    model: &Model,
    ls: &[usize],
    samples: usize,
    seed: u64,
) -> Result<Vec<PerimeterRow>, ScalingError> {
    let bm = boltzmann(model)?;
    let s2 = bm.critical.sigma2.v;
    Ok(ls
        .iter()
        .enumerate()
        .map(|(k, &l)| {
            let verts: Vec<f64> = (0..samples as u64)
                .into_par_iter()
                .map(|i| {
                    let mut rng = stream_rng(seed, ((k as u64) << 32) | i);
                    (sample_forest_sizes(&bm.laws, l, &mut rng).v + 1) as f64
                })
                .collect();
            let l2 = (l * l) as f64;
            let x: Vec<f64> = verts.iter().map(|v| v / l2).collect();
            let ks = ks_one_sample(&x, |y| pointed_area_cdf(s2 * y));
            let inv: Vec<f64> = verts.iter().map(|v| l2 / (s2 * v)).collect();
            let inverse_v = mean(&verts.iter().map(|v| 1.0 / v).collect::<Vec<_>>());
            PerimeterRow {
                l,
                samples,
                seed,
                ks: ks.statistic,
                p_value: ks.p_value,
                inverse_moment: mean(&inv),
                k_over_l2: 1.0 / (l2 * inverse_v),
                k_target: 1.0 / s2,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub m: usize,
    pub horizon: usize,
    pub runs: usize,
    pub seed: u64,
    pub threshold: f64,
    pub exceed: usize,
    pub fraction: f64,
    pub mean_max_deviation: f64,
}

/// Fraction of runs in which `max_{k <= K m} |Lambda^V(k) - a_V k|` exceeds
/// `m^{3/4}`, over independent sequences of mobiles.
pub fn concentration_check(
    model: &Model,
    m: usize,
    k_factor: usize,
    runs: usize,
    seed: u64,
) -> Result<ConcentrationReport, ScalingError> {
    let bm = boltzmann(model)?;
    let a_v = bm.critical.a.v;
    let horizon = k_factor * m;
    let threshold = (m as f64).powf(0.75);
    let devs: Vec<f64> = (0..runs as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            let colors = depth_first_colors(&bm.laws, horizon, &mut rng);
            let mut whites = 0u64;
            let mut worst: f64 = 0.0;
            for (k, &c) in colors.iter().enumerate() {
                whites += c as u64;
                worst = worst.max((whites as f64 - a_v * (k + 1) as f64).abs());
            }
            worst
        })
        .collect();
    let exceed = devs.iter().filter(|&&d| d > threshold).count();
    Ok(ConcentrationReport {
        m,
        horizon,
        runs,
        seed,
        threshold,
        exceed,
        fraction: exceed as f64 / runs as f64,
        mean_max_deviation: mean(&devs),
    })
}
