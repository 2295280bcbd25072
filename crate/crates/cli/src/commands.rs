use std::collections::HashSet;
use std::path::Path;

use bdlab::bijections::{boundary_forward, cvs_forward, PointedMap};
use bdlab::boltzmann::{solve_admissibility, WeightSequence};
use bdlab::continuum::brownian_disk;
use bdlab::map::{write_pmap1, MapJson};
use bdlab::scaling::{
    boltzmann_perimeter_law, concentration_check, encoding_limit_check, scaling_run, two_point, universality_compare,
    Model, ModelSpec,
};
use bdlab::trees::{enumerate_labeled_forests, for_each_well_labeled_tree, uniform_labeled_forest, ForestJson};
use bdlab::util::stream_rng;
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::artifact::{emit, in_dir, to_json_text, Meta};
use crate::error::CliError;
use crate::{
    Command, ConstantsArgs, ContinuumArgs, Diagnostic, Format, ModelName, SampleArgs, ScalingArgs, Suite, VerifyArgs,
};

/// Enumeration beyond this size takes minutes and overflows the closed-form check.
const MAX_VERIFY_N: usize = 5;

pub fn dispatch(command: &Command) -> Result<(), CliError> {
    let meta = Meta::new(command, command.seed().unwrap_or(0));
    match command {
        Command::Sample(a) => sample(a, &meta),
        Command::Verify(a) => verify(a, &meta),
        Command::Constants(a) => constants(a, &meta),
        Command::Scaling(a) => scaling(a, &meta),
        Command::Continuum(a) => continuum(a, &meta),
    }
}

fn pointed_json(pm: &PointedMap, weight: f64) -> Value {
    json!({
        "map": MapJson::from(&pm.map),
        "star": pm.star,
        "labels": pm.labels,
        "weight": weight,
    })
}

fn sample(a: &SampleArgs, meta: &Meta) -> Result<(), CliError> {
    let n = a.n.ok_or_else(|| CliError::Usage("--n is required".into()))?;
    let rule = if a.model.model == ModelName::Forest { Model::new(ModelSpec::quadrangulations(a.model.perimeter))? } else { a.model.build()? };
    let l = match a.l {
        Some(0) => return Err(CliError::Usage("--l must be positive".into())),
        Some(l) => l,
        None => rule.perimeter_for(n)?.l,
    };
    if a.model.model == ModelName::Forest {
        if a.format == Format::Pmap1 {
            return Err(CliError::Usage("forests are only written as JSON".into()));
        }
        let forests: Vec<ForestJson> = (0..a.samples as u64)
            .into_par_iter()
            .map(|i| {
                let f = uniform_labeled_forest(l, n as usize, &mut stream_rng(a.seed, i));
                ForestJson::from_parts(&f.forest, &f.labels)
            })
            .collect();
        let body = meta.wrap(json!({ "l": l, "n": n, "forests": forests }));
        return emit(a.out.as_deref(), to_json_text(&body).as_bytes());
    }
    let maps = (0..a.samples as u64)
        .into_par_iter()
        .map(|i| {
            let s = rule.sample(l, n, &mut stream_rng(a.seed, i))?;
            s.pointed
                .check_distances()
                .map_err(|v| CliError::Invariant(format!("distance identity fails at vertex {v} of sample {i}")))?;
            Ok(s)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    match a.format {
        Format::Json => {
            let items: Vec<Value> = maps.iter().map(|s| pointed_json(&s.pointed, s.weight)).collect();
            let body = meta.wrap(json!({ "l": l, "n": n, "maps": items }));
            emit(a.out.as_deref(), to_json_text(&body).as_bytes())
        }
        Format::Pmap1 => {
            let dir = a.out.as_deref().ok_or_else(|| CliError::Usage("--format pmap1 needs --out <dir>".into()))?;
            let mut items = Vec::new();
            for (i, s) in maps.iter().enumerate() {
                let file = format!("sample_{i:04}.pmap1");
                emit(Some(&in_dir(dir, &file)?), &write_pmap1(&s.pointed.map))?;
                items.push(json!({ "file": file, "star": s.pointed.star, "labels": s.pointed.labels, "weight": s.weight }));
            }
            let body = meta.wrap(json!({ "l": l, "n": n, "maps": items }));
            emit(Some(&in_dir(dir, "samples.json")?), to_json_text(&body).as_bytes())
        }
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Rooted quadrangulations with perimeter `2l` and `n` internal faces.
fn rooted_quadrangulations(l: usize, n: usize) -> u128 {
    3u128.pow(n as u32) * factorial(2 * l) * factorial(2 * n + l - 1)
        / (factorial(l) * factorial(l - 1) * factorial(n) * factorial(n + l + 1))
}

fn verify_bijections(max_n: usize, lines: &mut Vec<String>, rows: &mut Vec<Value>) -> bool {
    let mut ok = true;
    for l in 1..=3 {
        for n in 0..=max_n {
            let forests = enumerate_labeled_forests(l, n);
            let mut codes = HashSet::new();
            let mut identities = true;
            for f in &forests {
                match boundary_forward(f) {
                    Ok(pm) => {
                        identities &= pm.check_distances().is_ok() && pm.root_points_away();
                        codes.insert(pm.map.canonical_pointed_code(pm.star));
                    }
                    Err(_) => identities = false,
                }
            }
            // each rooted map has n + l + 1 vertices, and half the pointings leave the root edge pointing away
            let expected = rooted_quadrangulations(l, n) * (n + l + 1) as u128 / 2;
            let pass = identities && codes.len() == forests.len() && forests.len() as u128 == expected;
            ok &= pass;
            lines.push(format!(
                "boundary l={l} n={n} forests={} maps={} expected={expected} {}",
                forests.len(),
                codes.len(),
                if pass { "ok" } else { "FAIL" }
            ));
            rows.push(json!({ "bijection": "boundary", "l": l, "n": n, "forests": forests.len(), "maps": codes.len(), "expected": expected as u64, "pass": pass }));
        }
    }
    for n in 1..=max_n {
        let mut codes = HashSet::new();
        let mut count = 0u64;
        let mut identities = true;
        let walked = for_each_well_labeled_tree(n, &mut |t| {
            match cvs_forward(t) {
                Ok(pm) => {
                    identities &= pm.check_distances().is_ok();
                    codes.insert(pm.map.canonical_pointed_code(pm.star));
                }
                Err(_) => identities = false,
            }
            count += 1;
        });
        // Catalan(n) 3^n well-labeled trees
        let expected = factorial(2 * n) / (factorial(n) * factorial(n + 1)) * 3u128.pow(n as u32);
        let pass = walked.is_ok() && identities && codes.len() as u64 == count && count as u128 == expected;
        ok &= pass;
        lines.push(format!("cvs n={n} trees={count} maps={} expected={expected} {}", codes.len(), if pass { "ok" } else { "FAIL" }));
        rows.push(json!({ "bijection": "cvs", "n": n, "trees": count, "maps": codes.len(), "expected": expected as u64, "pass": pass }));
    }
    ok
}

/// `d(v, v_*) = l(v) - l(v_*)` and `l(v_*) = min l - 1` on random boundary maps.
fn verify_distances(samples: usize, n: usize, seed: u64, lines: &mut Vec<String>) -> Result<(), CliError> {
    let bad = (0..samples as u64)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = stream_rng(seed, i);
            let l = rng.random_range(1..=20);
            let Ok(pm) = boundary_forward(&uniform_labeled_forest(l, n, &mut rng)) else { return true };
            let star = pm.star as usize;
            let min_other = pm.labels.iter().enumerate().filter(|&(v, _)| v != star).map(|(_, &x)| x).min();
            pm.check_distances().is_err() || min_other.is_some_and(|m| pm.labels[star] != m - 1)
        })
        .min();
    match bad {
        Some(i) => Err(CliError::Invariant(format!("distance identities fail on sample {i} (stream {i})"))),
        None => {
            lines.push(format!("distances samples={samples} n={n} ok"));
            Ok(())
        }
    }
}

fn verify(a: &VerifyArgs, meta: &Meta) -> Result<(), CliError> {
    if a.max_n > MAX_VERIFY_N {
        return Err(CliError::Usage(format!("--max-n is capped at {MAX_VERIFY_N}")));
    }
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    let mut ok = true;
    if matches!(a.suite, Suite::Bijections | Suite::All) {
        ok &= verify_bijections(a.max_n, &mut lines, &mut rows);
    }
    let distances = if matches!(a.suite, Suite::Distances | Suite::All) {
        verify_distances(a.samples, a.n, a.seed, &mut lines)
    } else {
        Ok(())
    };
    lines.push(if ok && distances.is_ok() { "pass".into() } else { "FAIL".into() });
    let text = lines.join("\n") + "\n";
    emit(None, text.as_bytes())?;
    if let Some(out) = &a.out {
        let body = meta.wrap(json!({ "rows": rows, "pass": ok && distances.is_ok() }));
        emit(Some(out), to_json_text(&body).as_bytes())?;
    }
    distances?;
    if ok {
        Ok(())
    } else {
        Err(CliError::Invariant("bijection suite failed".into()))
    }
}

fn constants(a: &ConstantsArgs, meta: &Meta) -> Result<(), CliError> {
    let w: WeightSequence<f64> = a.weights.parse()?;
    let c = solve_admissibility(&w)?;
    let mut body = serde_json::to_value(&c).expect("constants serialize");
    body["weights"] = json!(w.to_string());
    emit(a.out.as_deref(), to_json_text(&meta.wrap(body)).as_bytes())
}

fn write_json(out: Option<&Path>, name: &str, body: Value) -> Result<(), CliError> {
    match out {
        Some(dir) => emit(Some(&in_dir(dir, name)?), to_json_text(&body).as_bytes()),
        None => emit(None, to_json_text(&body).as_bytes()),
    }
}

fn scaling(a: &ScalingArgs, meta: &Meta) -> Result<(), CliError> {
    let model = a.model.build()?;
    let out = a.out.as_deref();
    let body = match a.diagnostic {
        Diagnostic::Run => {
            let r = scaling_run(&model, &a.sizes, a.samples, a.seed)?;
            if let Some(dir) = out {
                let csv = meta.csv_header() + &r.to_csv();
                emit(Some(&in_dir(dir, "scaling.csv")?), csv.as_bytes())?;
            }
            r.to_json()
        }
        Diagnostic::Universality => {
            let other = ModelSpec::boltzmann(a.compare_weights.parse()?, a.compare_size_symbol, a.model.perimeter);
            let other = Model::new(other)?;
            let seeds = [a.seed, a.seed.wrapping_add(1)];
            let ta = two_point(&model, a.n, a.samples, seeds[0], false)?;
            let tb = two_point(&other, a.n, a.samples, seeds[1], false)?;
            let r = universality_compare(&ta.rescaled(), &tb.rescaled());
            json!({
                "models": [model.spec.describe(), other.spec.describe()],
                "n": a.n,
                "perimeters": [ta.l, tb.l],
                "scales": [ta.scale, tb.scale],
                "seeds": seeds,
                "report": r,
            })
        }
        Diagnostic::Encoding => {
            serde_json::to_value(encoding_limit_check(&model, a.n, a.samples, a.grid, a.seed)?).expect("report")
        }
        Diagnostic::Perimeter => {
            json!({ "rows": boltzmann_perimeter_law(&model, &a.perimeters, a.samples, a.seed)? })
        }
        Diagnostic::Concentration => {
            let m = usize::try_from(a.n).map_err(|_| CliError::Usage("--n too large".into()))?;
            serde_json::to_value(concentration_check(&model, m, 1, a.samples, a.seed)?).expect("report")
        }
    };
    let name = format!("scaling_{}.json", format!("{:?}", a.diagnostic).to_lowercase());
    write_json(out, &name, meta.wrap(body))
}

fn continuum(a: &ContinuumArgs, meta: &Meta) -> Result<(), CliError> {
    let disks = (0..a.samples as u64)
        .into_par_iter()
        .map(|i| {
            let disk = brownian_disk(a.perimeter, a.area, a.grid, &mut stream_rng(a.seed, i))?;
            let defects = disk.star_identity_defect();
            let tau = disk.tau();
            let within = defects.iter().filter(|&&d| d <= tau).count() as f64 / defects.len().max(1) as f64;
            let summary = json!({
                "index": i,
                "metadata": disk.metadata(a.seed),
                "diameter": disk.diameter(),
                "boundary_length": disk.boundary_length(),
                "tau": tau,
                "star_identity_within_tau": within,
            });
            Ok((summary, a.out.as_ref().map(|_| disk.to_csv())))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    match a.out.as_deref() {
        Some(dir) => {
            for (i, (summary, csv)) in disks.into_iter().enumerate() {
                let csv = meta.csv_header() + &csv.unwrap_or_default();
                emit(Some(&in_dir(dir, &format!("disk_{i:04}.csv"))?), csv.as_bytes())?;
                emit(Some(&in_dir(dir, &format!("disk_{i:04}.json"))?), to_json_text(&meta.wrap(summary)).as_bytes())?;
            }
            Ok(())
        }
        None => {
            let summaries: Vec<Value> = disks.into_iter().map(|d| d.0).collect();
            emit(None, to_json_text(&meta.wrap(json!({ "disks": summaries }))).as_bytes())
        }
    }
}
