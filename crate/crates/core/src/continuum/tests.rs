use super::*;
use rand::Rng;
use crate::stats::{ks_one_sample, ks_two_sample, mean, variance};
use crate::util::stream_rng;

fn disk(seed: u64, m: usize) -> DiskApprox {
    brownian_disk(1.0, 1.0, m, &mut stream_rng(seed, 0)).unwrap()
}

/// CDF of `t / A` for `t` the hitting time of `-y` under the first-passage bridge
/// from `0` to `-L` at time `A`, by midpoint quadrature of
/// `j_y(t) j_{L-y}(A-t) / j_L(A)`.
fn hitting_cdf(y: f64, l: f64, a: f64) -> impl Fn(f64) -> f64 {
    let cells = 20_000;
    let h = a / cells as f64;
    let mut cdf = vec![0.0; cells + 1];
    for i in 0..cells {
        let t = (i as f64 + 0.5) * h;
        let dens = first_passage_density(y, t) * first_passage_density(l - y, a - t) / first_passage_density(l, a);
        cdf[i + 1] = cdf[i] + dens * h;
    }
    move |u: f64| {
        let pos = (u.clamp(0.0, 1.0) * cells as f64).min(cells as f64 - 1e-9);
        let i = pos as usize;
        let frac = pos - i as f64;
        cdf[i] + frac * (cdf[i + 1] - cdf[i])
    }
}

#[test]
fn half_level_hitting_time_law() {
    let mut rng = stream_rng(11, 0);
    let m = 4096;
    let samples: Vec<f64> = (0..10_000)
        .map(|_| {
            let b = sample_fpb(1.0, 1.0, m, &mut rng).unwrap();
            b.time(b.hitting_index(0.5))
        })
        .collect();
    let ks = ks_one_sample(&samples, hitting_cdf(0.5, 1.0, 1.0));
    assert!(ks.statistic < 0.05, "KS {}", ks.statistic);
}

#[test]
fn bridge_scaling() {
    let lambda = 4.0f64;
    let m = 1024;
    let mut rng = stream_rng(12, 0);
    let mut base = Vec::new();
    let mut scaled = Vec::new();
    for _ in 0..10_000 {
        let b = sample_fpb(1.0, 1.0, m, &mut rng).unwrap();
        base.push(b.values()[m / 3]);
        let s = sample_fpb(lambda.sqrt(), lambda, m, &mut rng).unwrap();
        scaled.push(s.values()[m / 3] / lambda.sqrt());
    }
    let ks = ks_two_sample(&base, &scaled);
    assert!(ks.statistic < 0.05, "KS {}", ks.statistic);
}

#[test]
fn dstar_identities() {
    let mut rng = stream_rng(13, 1);
    for seed in 0..4 {
        let d = disk(seed, 1024);
        let m = d.field.m();
        assert_eq!(d.dstar(0, m), 0.0);
        assert!(d.star_identity_defect().iter().all(|&e| e < 1e-9));
        assert!(d.metric.axiom_defect(200_000, &mut rng) < 1e-12);
        for _ in 0..2000 {
            let i = rng.random_range(0..=m);
            let j = rng.random_range(0..=m);
            assert!(d.dstar(i, j) <= d.field.d_z(i, j) + 1e-12);
            if d.field.d_x(i, j) <= d.eps_glue {
                assert_eq!(d.dstar(i, j), 0.0);
            }
            assert!(d.dstar(i, j) >= (d.field.z[i] - d.field.z[j]).abs() - 1e-12);
        }
    }
}

#[test]
fn boundary_parametrization() {
    let mut counts = Vec::new();
    for (seed, m) in [(20u64, 256usize), (21, 1024), (22, 4096)] {
        let d = disk(seed, m);
        let bd = d.boundary_param();
        assert_eq!(bd[0], 0);
        assert_eq!(*bd.last().unwrap(), m);
        assert!(bd.windows(2).all(|w| d.field.floor[w[0]] <= d.field.floor[w[1]]));
        assert!((d.boundary_length() - 1.0).abs() < 1e-12);
        let classes: std::collections::BTreeSet<u32> = bd.iter().map(|&i| d.metric.class_of[i]).collect();
        counts.push(classes.len() as f64 / (m as f64).sqrt());
        // boundary points are at positive distance from interior points with distinct labels
        let zmin = d.field.z[d.star_index];
        for &r in bd.iter().step_by(7) {
            if d.field.z[r] - zmin > d.tau() {
                assert!(d.dstar(r, d.star_index) > 0.0);
            }
        }
    }
    // one boundary class per floor level, about sqrt(m) of them at L = A = 1
    assert!(counts.iter().all(|&c| (0.9..1.2).contains(&c)), "{counts:?}");
}

#[test]
fn masses_sum_to_area() {
    let d = disk(30, 512);
    let total: f64 = d.class_masses().iter().sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn slice_metric_dominates_disk_metric() {
    let d = disk(40, 2048);
    let exc = d.field.excursions();
    let &(a, b) = exc.iter().max_by_key(|(a, b)| b - a).unwrap();
    let q = compute_dtilde_star(&d.field, a, b, d.eps_glue).unwrap();
    let mut rng = stream_rng(40, 1);
    assert!(q.axiom_defect(100_000, &mut rng) < 1e-12);
    for _ in 0..5000 {
        let i = rng.random_range(a..=b);
        let j = rng.random_range(a..=b);
        assert!(q.distance(i, j) >= d.dstar(i, j) - 1e-12);
        assert!(q.distance(i, j) <= d.field.d_z_linear(i, j) + 1e-12);
    }
    let (s, zmin) = (a..=b).map(|i| (i, d.field.z[i])).fold((a, f64::INFINITY), |acc, p| if p.1 < acc.1 { p } else { acc });
    assert!((q.distance(a, s) - (d.field.z[a] - zmin)).abs() < 1e-9);
    assert_eq!(
        compute_dtilde_star(&d.field, a, b - 1, d.eps_glue),
        Err(ContinuumError::NotAnExcursion { a, b: b - 1 })
    );
}

/// The first and last times at which the labels of an excursion fall to a level
/// `r` trace two geodesics to the minimum.
#[test]
fn slice_boundaries_are_geodesics() {
    let d = disk(41, 2048);
    let &(a, b) = d.field.excursions().iter().max_by_key(|(a, b)| b - a).unwrap();
    let q = compute_dtilde_star(&d.field, a, b, d.eps_glue).unwrap();
    let z = &d.field.z;
    let tau = d.tau();
    let zmin = (a..=b).map(|i| z[i]).fold(f64::INFINITY, f64::min);
    let top = z[a];
    let first = |r: f64| (a..=b).find(|&i| z[i] <= r).unwrap();
    let last = |r: f64| (a..=b).rev().find(|&i| z[i] <= r).unwrap();
    let levels: Vec<f64> = (0..=10).map(|t| zmin + (top - zmin) * t as f64 / 10.0).collect();
    for gamma in [&first as &dyn Fn(f64) -> usize, &last] {
        for w in levels.windows(2) {
            let (i, j) = (gamma(w[0]), gamma(w[1]));
            let gap = q.distance(i, j) - (z[i] - z[j]).abs();
            assert!(gap.abs() <= tau, "gap {gap} tau {tau}");
        }
    }
}

#[test]
fn identification_dichotomy() {
    let d = disk(50, 1024);
    let tau = d.tau();
    let mut rng = stream_rng(50, 1);
    let m = d.field.m();
    let mut zero_pairs = 0;
    for _ in 0..200_000 {
        let i = rng.random_range(0..=m);
        let j = rng.random_range(0..=m);
        if d.dstar(i, j) <= 1e-12 {
            zero_pairs += 1;
            assert!(d.field.d_x(i, j) <= d.eps_glue || d.field.d_z(i, j) <= tau, "{i} {j}");
        }
    }
    assert!(zero_pairs > 0);
}

#[test]
fn coarse_grid_stays_close() {
    let d = disk(60, 1024);
    let coarse = compute_dstar(d.field.coarsen(2), default_eps_glue(1.0, 512)).unwrap();
    let z = &d.field.z;
    // largest label range over one coarse cell
    let osc = (0..512).map(|c| {
        let w = &z[2 * c..=2 * c + 2];
        w.iter().copied().fold(f64::NEG_INFINITY, f64::max) - w.iter().copied().fold(f64::INFINITY, f64::min)
    });
    let osc = osc.fold(0.0, f64::max);
    let mut rng = stream_rng(60, 1);
    let trials = 20_000;
    let mut close = 0;
    for _ in 0..trials {
        let i = rng.random_range(0..=512);
        let j = rng.random_range(0..=512);
        // fewer points to route through, same gluings and label minima
        assert!(coarse.dstar(i, j) >= d.dstar(2 * i, 2 * j) - 1e-9);
        if coarse.dstar(i, j) - d.dstar(2 * i, 2 * j) <= osc {
            close += 1;
        }
    }
    assert!(close as f64 >= 0.95 * trials as f64, "{close}/{trials}");
}

#[test]
fn scaled_disk_metric() {
    let d = disk(70, 512);
    let lambda = 16.0f64;
    let s = compute_dstar(d.field.scaled(lambda), default_eps_glue(lambda, 512)).unwrap();
    let c = lambda.powf(-0.25);
    for (i, j) in [(0, 100), (30, 400), (256, 257), (11, 511)] {
        assert!((c * s.dstar(i, j) - d.dstar(i, j)).abs() < 1e-9);
    }
}

#[test]
fn area_laws() {
    let mut rng = stream_rng(80, 0);
    let n = 1_000_000;
    let inv: Vec<f64> = (0..n).map(|_| 1.0 / sample_area_law(AreaKind::Pointed, &mut rng)).collect();
    let (mu, sd) = (mean(&inv), variance(&inv).sqrt());
    assert!((mu - 1.0).abs() < 3.0 * sd / (n as f64).sqrt(), "{mu}");
    let pointed: Vec<f64> = (0..20_000).map(|_| sample_area_law(AreaKind::Pointed, &mut rng)).collect();
    assert!(ks_one_sample(&pointed, pointed_area_cdf).p_value > 0.01);
    // free law: E[1/A] is the mean of a chi-square with three degrees of freedom
    let free: Vec<f64> = (0..200_000).map(|_| 1.0 / sample_area_law(AreaKind::Free, &mut rng)).collect();
    assert!((mean(&free) - 3.0).abs() < 0.03);
}

#[test]
fn area_densities_integrate_to_one() {
    for kind in [AreaKind::Pointed, AreaKind::Free] {
        // substitute A = 1/u^2 to tame the tail
        let cells = 200_000;
        let h = 40.0 / cells as f64;
        let s: f64 = (0..cells)
            .map(|i| {
                let u = (i as f64 + 0.5) * h;
                area_density(kind, 1.0 / (u * u)) * 2.0 / u.powi(3) * h
            })
            .sum();
        assert!((s - 1.0).abs() < 1e-6, "{kind:?} {s}");
    }
    assert!((pointed_area_cdf(1.0) - 0.31731050786291415).abs() < 1e-9);
}

#[test]
fn free_disks() {
    let mut rng = stream_rng(90, 0);
    for kind in [AreaKind::Pointed, AreaKind::Free] {
        let d = free_disk(1.0, kind, 256, &mut rng).unwrap();
        assert!((d.boundary_length() - 1.0).abs() < 1e-12);
        assert!(d.field.area > 0.0);
    }
}

#[test]
fn diameter_spread() {
    let diam: Vec<f64> = (0..40).map(|s| disk(100 + s, 512).diameter()).collect();
    let cv = variance(&diam).sqrt() / mean(&diam);
    assert!(cv < 1.0, "{cv}");
}

#[test]
fn csv_and_metadata() {
    let d = disk(110, 128);
    let csv = d.to_csv();
    let k = d.metric.num_classes();
    assert_eq!(csv.lines().count(), 1 + k * (k + 1) / 2);
    assert!(csv.starts_with("i,j,dstar\n0,0,0\n"));
    let meta = serde_json::to_value(d.metadata(110)).unwrap();
    assert_eq!(meta["L"], 1.0);
    assert_eq!(meta["m"], 128);
    assert_eq!(meta["seed"], 110);
}
