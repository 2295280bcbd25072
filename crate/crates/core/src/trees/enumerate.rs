use super::{sample::forest_from_steps, LabeledForest, MobileForest, PlaneForest, TreeError};

/// All plane forests with `l` trees and `n` edges, in a fixed order.
pub fn enumerate_plane_forests(l: usize, n: usize) -> Vec<PlaneForest> {
    let mut out = Vec::new();
    let mut steps = Vec::with_capacity(2 * n + l);
    walk(l as i64, n, n + l, 0, &mut steps, &mut |s| out.push(forest_from_steps(s, l)));
    out
}

fn walk(l: i64, ups: usize, downs: usize, level: i64, steps: &mut Vec<bool>, f: &mut dyn FnMut(&[bool])) {
    if ups == 0 && downs == 0 {
        f(steps);
        return;
    }
    if ups > 0 {
        steps.push(true);
        walk(l, ups - 1, downs, level + 1, steps, f);
        steps.pop();
    }
    if downs > 0 && (level - 1 > -l || (ups == 0 && downs == 1)) {
        steps.push(false);
        walk(l, ups, downs - 1, level - 1, steps, f);
        steps.pop();
    }
}

/// All `x` in `{-1, 0, 1, ...}^parts` summing to zero.
pub(crate) fn compositions(parts: usize) -> Vec<Vec<i64>> {
    fn rec(left: usize, budget: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if left == 1 {
            cur.push(budget);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        // the remaining parts can absorb at most left-1 units of deficit
        for x in -1..=budget + (left as i64 - 1) {
            cur.push(x);
            rec(left - 1, budget - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        rec(parts, 0, &mut Vec::new(), &mut out);
    }
    out
}

fn for_each_edge_labeling(forest: &PlaneForest, roots: &[i64], f: &mut dyn FnMut(Vec<i64>)) {
    let n = forest.num_vertices();
    let non_roots: Vec<u32> = (0..n as u32).filter(|&v| forest.parent(v) != super::NONE).collect();
    let mut inc = vec![-1i64; non_roots.len()];
    loop {
        let mut labels = vec![0i64; n];
        let mut k = 0;
        let mut r = 0;
        for v in 0..n as u32 {
            let p = forest.parent(v);
            if p == super::NONE {
                labels[v as usize] = roots[r];
                r += 1;
            } else {
                labels[v as usize] = labels[p as usize] + inc[k];
                k += 1;
            }
        }
        f(labels);
        let mut i = 0;
        while i < inc.len() && inc[i] == 1 {
            inc[i] = -1;
            i += 1;
        }
        if i == inc.len() {
            return;
        }
        inc[i] += 1;
    }
}

/// All labeled forests with `l` trees, `n` edges and first root label 0.
pub fn enumerate_labeled_forests(l: usize, n: usize) -> Vec<LabeledForest> {
    let mut out = Vec::new();
    let root_choices: Vec<Vec<i64>> = compositions(l)
        .into_iter()
        .map(|x| {
            let mut r = vec![0i64];
            for &s in &x[..l - 1] {
                r.push(r.last().unwrap() + s);
            }
            r
        })
        .collect();
    for forest in enumerate_plane_forests(l, n) {
        for roots in &root_choices {
            for_each_edge_labeling(&forest, roots, &mut |labels| {
                out.push(LabeledForest { forest: forest.clone(), labels });
            });
        }
    }
    out
}

/// Every labeling of a two-type forest (white vertices at even depth) that
/// satisfies the mobile constraints, first root labelled 0.
pub fn mobile_labelings(forest: &PlaneForest) -> Vec<Vec<i64>> {
    let l = forest.num_trees();
    let mut partial: Vec<Vec<i64>> = compositions(l)
        .into_iter()
        .map(|x| {
            let mut labels = vec![0i64; forest.num_vertices()];
            let mut cur = 0;
            for (i, &r) in forest.roots().iter().enumerate() {
                if i > 0 {
                    cur += x[i - 1];
                }
                labels[r as usize] = cur;
            }
            labels
        })
        .collect();
    for b in 0..forest.num_vertices() as u32 {
        if forest.is_white(b) {
            continue;
        }
        let ch = forest.children(b);
        let comps = compositions(ch.len() + 1);
        let mut next = Vec::with_capacity(partial.len() * comps.len());
        for labels in &partial {
            for x in &comps {
                let mut lab = labels.clone();
                let mut cur = lab[forest.parent(b) as usize];
                for (i, &c) in ch.iter().enumerate() {
                    cur += x[i];
                    lab[c as usize] = cur;
                }
                next.push(lab);
            }
        }
        partial = next;
    }
    partial
}

/// All labeled mobile forests with `l` trees and `vertices` vertices in total.
pub fn enumerate_mobile_forests(l: usize, vertices: usize) -> Vec<MobileForest> {
    if vertices < l {
        return Vec::new();
    }
    let mut out = Vec::new();
    for forest in enumerate_plane_forests(l, vertices - l) {
        for labels in mobile_labelings(&forest) {
            out.push(MobileForest { forest: forest.clone(), labels });
        }
    }
    out
}

/// Visits every well-labeled tree with `n` edges and root label 0.
pub fn for_each_well_labeled_tree(n: usize, f: &mut dyn FnMut(&LabeledForest)) -> Result<(), TreeError> {
    if n > 8 {
        return Err(TreeError::TooLarge(n));
    }
    for forest in enumerate_plane_forests(1, n) {
        for_each_edge_labeling(&forest, &[0], &mut |labels| {
            f(&LabeledForest { forest: forest.clone(), labels });
        });
    }
    Ok(())
}

pub fn enumerate_well_labeled_trees(n: usize) -> Result<Vec<LabeledForest>, TreeError> {
    let mut out = Vec::new();
    for_each_well_labeled_tree(n, &mut |t| out.push(t.clone()))?;
    Ok(out)
}
