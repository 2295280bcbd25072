use proptest::prelude::*;

use super::*;
use crate::boltzmann::{SizeSymbol, WeightSequence};
use crate::trees::uniform_labeled_forest;
use crate::util::stream_rng;

fn quads() -> Model {
    Model::new(ModelSpec::quadrangulations(1.0)).unwrap()
}

fn boltzmann(q: WeightSequence<f64>, s: SizeSymbol) -> Model {
    Model::new(ModelSpec::boltzmann(q, s, 1.0)).unwrap()
}

#[test]
fn scaling_constants() {
    let q = quads();
    for n in [1u64, 100, 1 << 14] {
        assert!((q.scaling_constant(n) - (8.0 * n as f64 / 9.0).powf(0.25)).abs() < 1e-12);
    }
    // hexangulations, S = F: (4 p (p-1) n / 9)^{1/4} with p = 3
    let h = boltzmann(WeightSequence::two_p_angulation(3), SizeSymbol::F);
    assert!((h.scaling_constant(900) - (24.0f64 * 100.0).powf(0.25)).abs() < 1e-9);
    // uniform bipartite maps, S = E: (2n)^{1/4}
    let b = boltzmann(WeightSequence::uniform_bipartite(), SizeSymbol::E);
    assert!((b.scaling_constant(512) - 32.0f64.sqrt()).abs() < 1e-9);
}

#[test]
fn perimeter_rules() {
    let q = quads();
    assert_eq!(q.perimeter_for(1 << 14).unwrap(), PerimeterChoice { l: 181, raw: 181, adjusted: false });
    let b = boltzmann(WeightSequence::uniform_bipartite(), SizeSymbol::E);
    let n = 1u64 << 14;
    assert_eq!(b.perimeter_for(n).unwrap().l, (3.0 * (n as f64 / 2.0).sqrt()).round() as usize);
    // hexangulations with n edges need l = n mod 3
    let h = boltzmann(WeightSequence::two_p_angulation(3), SizeSymbol::E);
    let c = h.perimeter_for(3000).unwrap();
    assert_eq!((c.raw, c.l, c.adjusted), (77, 78, true));
    let mut fixed = quads();
    fixed.spec.l_rule = LRule::Fixed { l: 0 };
    assert_eq!(fixed.perimeter_for(10).unwrap().l, 1);
    fixed.spec.l_rule = LRule::Power { c: 1.0, exponent: 0.75 };
    assert_eq!(fixed.perimeter_for(1 << 12).unwrap().l, 512);
}

#[test]
fn star_distances_match_labels() {
    let q = quads();
    let mut rng = stream_rng(1, 0);
    for _ in 0..20 {
        let s = q.sample(5, 200, &mut rng).unwrap();
        let pm = &s.pointed;
        let d = pm.map.bfs_distances(pm.star).unwrap();
        for v in 0..pm.map.num_vertices() as u32 {
            assert_eq!(d.get(v) as i64, pm.labels[v as usize] - pm.labels[pm.star as usize]);
        }
    }
    // measure_maps checks the same identity on every sample it draws
    let b = boltzmann(WeightSequence::two_p_angulation(3), SizeSymbol::V);
    let (_, ms) = measure_maps(&b, 300, 50, 2, 0).unwrap();
    assert!(ms.iter().all(|m| m.weight == 1.0 && m.d_uv <= m.diam));
}

#[test]
fn depointing_weights() {
    let b = boltzmann(WeightSequence::quadrangulation(), SizeSymbol::E);
    let (_, ms) = measure_maps(&b, 400, 30, 3, 0).unwrap();
    assert!(ms.iter().all(|m| (m.weight * m.vertices as f64 - 1.0).abs() < 1e-12));
}

#[test]
fn degenerate_two_point() {
    let mut q = quads();
    q.spec.l_rule = LRule::Fixed { l: 1 };
    // a single internal face at perimeter 2: three vertices
    let tp = two_point(&q, 1, 300, 4, false).unwrap();
    assert!(tp.raw.iter().any(|&(d, _)| d == 0));
    assert!(tp.raw.iter().all(|&(d, _)| d <= 2));
}

#[test]
fn exponent_needs_four_sizes() {
    assert_eq!(
        diameter_exponent(&quads(), &[1 << 10], 10, 0),
        Err(ScalingError::InsufficientSizes(1))
    );
}

#[test]
fn trees_regime_exponent() {
    let mut q = quads();
    q.spec.l_rule = LRule::Power { c: 1.0, exponent: 0.75 };
    let fit = diameter_exponent(&q, &[1 << 8, 1 << 9, 1 << 10, 1 << 11, 1 << 12], 100, 5).unwrap();
    assert!(fit.slope > 0.35, "{fit:?}");
    assert!(fit.ci.0 <= fit.slope && fit.slope <= fit.ci.1);
}

#[test]
fn self_comparison_is_null() {
    let q = quads();
    let a = two_point(&q, 1 << 10, 2000, 6, false).unwrap();
    let b = two_point(&q, 1 << 10, 2000, 7, false).unwrap();
    let r = universality_compare(&a.rescaled(), &b.rescaled());
    assert!(r.p_value > 0.01, "{r:?}");
    assert_eq!(r.gaps.len(), 5);
}

#[test]
fn weighted_summaries() {
    let xs = [(1.0, 1.0), (2.0, 3.0), (3.0, 0.0)];
    assert_eq!(weighted_mean(&xs), 1.75);
    assert_eq!(weighted_quantile(&xs, 0.25), 1.0);
    assert_eq!(weighted_quantile(&xs, 0.26), 2.0);
    assert_eq!(weighted_quantile(&xs, 1.0), 2.0);
}

#[test]
fn report_rows_and_determinism() {
    let q = quads();
    let sizes = [64, 128, 256, 512];
    let r = scaling_run(&q, &sizes, 40, 8).unwrap();
    assert_eq!(r.rows.len(), 4 * 10);
    assert!(r.rows.iter().all(|row| row.samples == 40 && row.seed == 8));
    assert!(r.fitted_exponent.is_some());
    let csv = r.to_csv();
    assert!(csv.starts_with("statistic,n,value,samples,seed\ntwo_point_q10,64,"));
    assert_eq!(csv, scaling_run(&q, &sizes, 40, 8).unwrap().to_csv());
    let json = r.to_json();
    assert_eq!(json["model"]["model"]["kind"], "uniform_quadrangulation");
    assert_eq!(json["sizes"][3], 512);
}

#[test]
fn encoding_check_small() {
    let b = boltzmann(WeightSequence::quadrangulation(), SizeSymbol::F);
    let r = encoding_limit_check(&b, 4096, 400, 1024, 9).unwrap();
    assert_eq!(r.marginals.len(), 9);
    assert!(r.max_ks() < 0.15, "{r:?}");
    assert!(r.upsilon_rel_err() < 0.05);
    assert!(r.lambda_rel_err() < 0.02, "{r:?}");
    assert_eq!(encoding_limit_check(&quads(), 100, 1, 128, 0), Err(ScalingError::NeedsBoltzmann));
}

#[test]
fn perimeter_law_small() {
    let b = boltzmann(WeightSequence::quadrangulation(), SizeSymbol::V);
    let rows = boltzmann_perimeter_law(&b, &[128, 256], 20_000, 10).unwrap();
    for r in rows {
        assert!(r.ks < 0.05, "{r:?}");
        assert!((r.inverse_moment - 1.0).abs() < 0.05, "{r:?}");
        assert!((r.k_over_l2 / r.k_target - 1.0).abs() < 0.1, "{r:?}");
    }
}

#[test]
fn concentration_small() {
    let b = boltzmann(WeightSequence::quadrangulation(), SizeSymbol::V);
    let r = concentration_check(&b, 10_000, 1, 40, 11).unwrap();
    assert_eq!(r.exceed, 0);
    assert!(r.mean_max_deviation < r.threshold);
}

/// Trees of a uniform labeled forest are exchangeable: tree index and size
/// class are independent.
#[test]
fn forest_trees_exchangeable() {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    let (l, n) = (3, 30);
    let bins = |s: u32| match s {
        0..=3 => 0,
        4..=10 => 1,
        _ => 2,
    };
    let mut table = [[0f64; 3]; 3];
    let mut rng = stream_rng(12, 0);
    for _ in 0..20_000 {
        let f = uniform_labeled_forest(l, n, &mut rng);
        for (t, row) in table.iter_mut().enumerate() {
            let (a, b) = f.forest.tree_range(t);
            row[bins(b - a - 1)] += 1.0;
        }
    }
    let total: f64 = table.iter().flatten().sum();
    let mut stat = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let e = table[i].iter().sum::<f64>() * (0..3).map(|k| table[k][j]).sum::<f64>() / total;
            stat += (table[i][j] - e).powi(2) / e;
        }
    }
    let p = 1.0 - ChiSquared::new(4.0).unwrap().cdf(stat);
    assert!(p > 0.01, "chi2 {stat} p {p}");
}

#[test]
fn gh_proxy_basics() {
    let mut rng = stream_rng(13, 0);
    let pts = [0.0f64, 1.0, 3.0, 7.0];
    let a = FiniteMetric::from_fn(4, |i, j| (pts[i] - pts[j]).abs());
    assert_eq!(gh_proxy(&a, &a, 100, &mut rng).bound, 0.0);
    let b = a.scaled(2.0);
    assert!(gh_proxy(&a, &b, 100, &mut rng).bound >= a.diameter() / 2.0);
}

/// Exact Gromov–Hausdorff distance by enumerating correspondences.
fn brute_gh(a: &FiniteMetric, b: &FiniteMetric) -> f64 {
    let pairs: Vec<(usize, usize)> = (0..a.n).flat_map(|i| (0..b.n).map(move |j| (i, j))).collect();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << pairs.len()) {
        let r: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p).collect();
        let covers = (0..a.n).all(|i| r.iter().any(|p| p.0 == i)) && (0..b.n).all(|j| r.iter().any(|p| p.1 == j));
        if !covers {
            continue;
        }
        let mut dis: f64 = 0.0;
        for p in &r {
            for q in &r {
                dis = dis.max((a.get(p.0, q.0) - b.get(p.1, q.1)).abs());
            }
        }
        best = best.min(dis / 2.0);
    }
    best
}

fn metric_strategy() -> impl Strategy<Value = FiniteMetric> {
    (1usize..=3).prop_flat_map(|n| {
        prop::collection::vec((0.0f64..4.0, 0.0f64..4.0), n).prop_map(move |p| {
            FiniteMetric::from_fn(n, |i, j| ((p[i].0 - p[j].0).powi(2) + (p[i].1 - p[j].1).powi(2)).sqrt())
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn gh_proxy_is_a_lower_bound(a in metric_strategy(), b in metric_strategy(), seed in any::<u64>()) {
        let mut rng = stream_rng(seed, 0);
        let bound = gh_proxy(&a, &b, 10, &mut rng).bound;
        prop_assert!(bound <= brute_gh(&a, &b) + 1e-12);
    }
}
