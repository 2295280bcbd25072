use serde::Serialize;

use super::measure::{fit_with_bootstrap, measure_maps, universality_compare, weighted_mean, weighted_quantile, GAP_LEVELS};
use super::{ExponentFit, Model, PerimeterChoice, ScalingError, SizePoint};

/// One statistic; every row records its sample count and seed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatRow {
    pub statistic: String,
    pub n: u64,
    pub value: f64,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub model: serde_json::Value,
    pub sizes: Vec<u64>,
    pub perimeters: Vec<PerimeterChoice>,
    pub rows: Vec<StatRow>,
    pub fitted_exponent: Option<ExponentFit>,
}

impl ScalingReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("statistic,n,value,samples,seed\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{},{}\n", r.statistic, r.n, r.value, r.samples, r.seed));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Two-point quantiles, mean diameter and the re-rooting comparison
/// `d(u, v)` against `d(v_*, u)` at each size, plus the exponent fit when at
/// least four sizes are given.
pub fn scaling_run(model: &Model, sizes: &[u64], samples: usize, seed: u64) -> Result<ScalingReport, ScalingError> {
    let mut rows = Vec::new();
    let mut perimeters = Vec::new();
    let mut diams = Vec::new();
    let mut points = Vec::new();
    for (k, &n) in sizes.iter().enumerate() {
        perimeters.push(model.perimeter_for(n)?);
        let (l, ms) = measure_maps(model, n, samples, seed, k as u64)?;
        let scale = model.scaling_constant(n);
        let uv: Vec<(f64, f64)> = ms.iter().map(|m| (m.d_uv as f64 / scale, m.weight)).collect();
        let star: Vec<(f64, f64)> = ms.iter().map(|m| (m.d_star as f64 / scale, m.weight)).collect();
        let diam: Vec<(f64, f64)> = ms.iter().map(|m| (m.diam as f64, m.weight)).collect();
        let mut push = |statistic: String, value: f64| rows.push(StatRow { statistic, n, value, samples, seed });
        for p in GAP_LEVELS {
            push(format!("two_point_q{:02}", (p * 100.0).round()), weighted_quantile(&uv, p));
        }
        push("two_point_mean".into(), weighted_mean(&uv));
        push("star_distance_mean".into(), weighted_mean(&star));
        push("rerooting_ks".into(), universality_compare(&uv, &star).ks);
        let mean_diam = weighted_mean(&diam);
        push("diameter_mean".into(), mean_diam);
        push("diameter_rescaled_mean".into(), mean_diam / scale);
        points.push(SizePoint { n, l, mean_diameter: mean_diam, samples });
        diams.push(diam);
    }
    let fitted_exponent = (sizes.len() >= 4).then(|| fit_with_bootstrap(sizes, &diams, points, seed));
    Ok(ScalingReport { model: model.spec.describe(), sizes: sizes.to_vec(), perimeters, rows, fitted_exponent })
}
