use rand::seq::SliceRandom;
use rand::Rng;

use super::{LabeledForest, MobileForest, PlaneForest, NONE};
use crate::cycle::rotate_uniformly;

/// Decodes a contour step sequence (`true` = up) of a forest of `l` trees,
/// where each tree ends with a down step from its root.
pub(crate) fn forest_from_steps(steps: &[bool], l: usize) -> PlaneForest {
    let mut parent = vec![NONE];
    let mut path = vec![0u32];
    let mut done = 0;
    for &up in steps {
        if up {
            let v = parent.len() as u32;
            parent.push(*path.last().expect("inside a tree"));
            path.push(v);
        } else {
            path.pop();
            if path.is_empty() {
                done += 1;
                if done < l {
                    path.push(parent.len() as u32);
                    parent.push(NONE);
                }
            }
        }
    }
    debug_assert_eq!(done, l);
    PlaneForest::from_parents(parent).expect("contour decodes to a forest")
}

/// Uniform `+-1` sequence with `ups` up steps and `downs > ups` down steps
/// whose walk first reaches `ups - downs` at its last step.
pub fn uniform_first_passage_steps<R: Rng + ?Sized>(ups: usize, downs: usize, rng: &mut R) -> Vec<bool> {
    assert!(downs > ups, "walk must end below its start");
    let mut steps = vec![true; ups];
    steps.resize(ups + downs, false);
    steps.shuffle(rng);
    let x: Vec<i64> = steps.iter().map(|&u| if u { 1 } else { -1 }).collect();
    rotate_uniformly(&mut steps, &x, (downs - ups) as i64, rng);
    steps
}

pub fn uniform_plane_forest<R: Rng + ?Sized>(l: usize, n: usize, rng: &mut R) -> PlaneForest {
    assert!(l >= 1);
    forest_from_steps(&uniform_first_passage_steps(n, n + l, rng), l)
}

/// Uniform element of `{x in {-1,0,1,...}^parts : sum x = 0}` (stars and bars).
pub fn uniform_composition<R: Rng + ?Sized>(parts: usize, rng: &mut R) -> Vec<i64> {
    if parts == 0 {
        return vec![];
    }
    let mut bars = rand::seq::index::sample(rng, 2 * parts - 1, parts - 1).into_vec();
    bars.sort_unstable();
    let mut out = Vec::with_capacity(parts);
    let mut prev: i64 = -1;
    for &b in &bars {
        out.push(b as i64 - prev - 1 - 1);
        prev = b as i64;
    }
    out.push((2 * parts - 1) as i64 - prev - 1 - 1);
    out
}

/// Uniform labeled forest with `l` trees, `n` edges and first root label 0.
pub fn uniform_labeled_forest<R: Rng + ?Sized>(l: usize, n: usize, rng: &mut R) -> LabeledForest {
    let forest = uniform_plane_forest(l, n, rng);
    let steps = uniform_composition(l, rng);
    let mut labels = vec![0i64; forest.num_vertices()];
    let mut root_label = 0i64;
    let mut r = 0;
    for v in 0..forest.num_vertices() as u32 {
        let p = forest.parent(v);
        labels[v as usize] = if p == NONE {
            if r > 0 {
                root_label += steps[r - 1];
            }
            r += 1;
            root_label
        } else {
            labels[p as usize] + rng.random_range(-1..=1)
        };
    }
    LabeledForest { forest, labels }
}

/// Uniform labels for a two-type forest: root labels along a cyclic chain,
/// and around every black vertex a uniform sequence of increments `>= -1`
/// summing to zero.
pub fn uniform_mobile_labels<R: Rng + ?Sized>(forest: PlaneForest, rng: &mut R) -> MobileForest {
    let n = forest.num_vertices();
    let mut labels = vec![0i64; n];
    let steps = uniform_composition(forest.num_trees(), rng);
    let mut root_label = 0i64;
    for (r, &root) in forest.roots().iter().enumerate() {
        if r > 0 {
            root_label += steps[r - 1];
        }
        labels[root as usize] = root_label;
    }
    for b in 0..n as u32 {
        if forest.is_white(b) {
            continue;
        }
        let ch = forest.children(b);
        let x = uniform_composition(ch.len() + 1, rng);
        let mut cur = labels[forest.parent(b) as usize];
        for (i, &c) in ch.iter().enumerate() {
            cur += x[i];
            labels[c as usize] = cur;
        }
    }
    MobileForest { forest, labels }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::chi_square_uniform;
    use crate::trees::enumerate::compositions;
    use crate::trees::enumerate_labeled_forests;
    use crate::util::stream_rng;
    use std::collections::HashMap;

    #[test]
    fn single_vertex_forest() {
        let mut rng = stream_rng(1, 0);
        let f = uniform_labeled_forest(1, 0, &mut rng);
        assert_eq!(f.forest.num_vertices(), 1);
        assert_eq!(f.labels, vec![0]);
    }

    fn frequencies_match(l: usize, n: usize, draws: usize, seed: u64) -> f64 {
        let all = enumerate_labeled_forests(l, n);
        let index: HashMap<_, _> = all.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        let mut counts = vec![0u64; all.len()];
        let mut rng = stream_rng(seed, 0);
        for _ in 0..draws {
            let f = uniform_labeled_forest(l, n, &mut rng);
            f.validate().unwrap();
            counts[index[&f]] += 1;
        }
        chi_square_uniform(&counts).p_value
    }

    #[test]
    fn uniform_on_l2_n1() {
        assert!(frequencies_match(2, 1, 100_000, 11) > 0.01);
    }

    #[test]
    fn uniform_on_l3_n3() {
        assert!(frequencies_match(3, 3, 200_000, 12) > 0.01);
    }

    #[test]
    fn compositions_are_uniform() {
        let all = compositions(4);
        let index: HashMap<_, _> = all.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        let mut counts = vec![0u64; all.len()];
        let mut rng = stream_rng(3, 0);
        for _ in 0..70_000 {
            counts[index[&uniform_composition(4, &mut rng)]] += 1;
        }
        assert!(chi_square_uniform(&counts).p_value > 0.01);
    }
}
