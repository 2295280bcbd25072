use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Binomial, Distribution, Gamma, Poisson};

use super::{BoltzmannError, OffspringLaws, SizeSymbol};
use crate::cycle::rotate_uniformly;
use crate::trees::{uniform_mobile_labels, MobileForest, PlaneForest, NONE};
use crate::util::ln_binomial;

/// Sizes of a mobile forest: white vertices, all vertices, black vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ForestSizes {
    pub v: u64,
    pub e: u64,
    pub f: u64,
}

impl ForestSizes {
    pub fn get(&self, s: SizeSymbol) -> u64 {
        match s {
            SizeSymbol::V => self.v,
            SizeSymbol::E => self.e,
            SizeSymbol::F => self.f,
        }
    }
}

/// Appends the preorder child counts of one two-type tree. Gives up (returning
/// `false`) as soon as `limit(sizes)` holds.
fn grow_tree<R: Rng + ?Sized>(
    laws: &OffspringLaws,
    counts: &mut Vec<u32>,
    sizes: &mut ForestSizes,
    limit: &dyn Fn(&ForestSizes) -> bool,
    rng: &mut R,
) -> bool {
    let mut open: Vec<u32> = Vec::new();
    let mut white = true;
    loop {
        let k = if white { laws.sample_white(rng) } else { laws.sample_black(rng) };
        counts.push(k);
        sizes.e += 1;
        if white {
            sizes.v += 1;
        } else {
            sizes.f += 1;
        }
        if limit(sizes) {
            return false;
        }
        open.push(k);
        // move to the next vertex in preorder
        loop {
            match open.last_mut() {
                None => return true,
                Some(0) => {
                    open.pop();
                }
                Some(r) => {
                    *r -= 1;
                    break;
                }
            }
        }
        white = open.len().is_multiple_of(2);
    }
}

fn label(forest_counts: &[u32], rng: &mut (impl Rng + ?Sized)) -> MobileForest {
    let forest = PlaneForest::from_child_counts(forest_counts).expect("preorder counts");
    uniform_mobile_labels(forest, rng)
}

/// Unconditioned mobile forest with `l` independent trees, labels uniform.
pub fn sample_mobile_forest<R: Rng + ?Sized>(
    laws: &OffspringLaws,
    l: usize,
    cap: u64,
    rng: &mut R,
) -> Result<MobileForest, BoltzmannError> {
    let mut counts = Vec::new();
    let mut sizes = ForestSizes::default();
    for _ in 0..l {
        if !grow_tree(laws, &mut counts, &mut sizes, &|s| s.e > cap, rng) {
            return Err(BoltzmannError::ResampleExceeded(cap));
        }
    }
    Ok(label(&counts, rng))
}

/// Two-type tree recovered from a one-type tree whose leaves are the white
/// vertices. A white vertex's black children form the chain of last-child
/// links above it; a black vertex's white children sit at the bottom of the
/// last-child chains started by its other children. Black vertices keep their
/// degree: `k + 1` children in the one-type tree for `k` children here.
pub fn two_type_from_one_type(one: &PlaneForest) -> PlaneForest {
    let n = one.num_vertices();
    let last_child = |v: usize| one.children(v as u32).last().copied();
    let mut bottom = vec![0u32; n];
    for v in (0..n).rev() {
        bottom[v] = match last_child(v) {
            None => v as u32,
            Some(c) => bottom[c as usize],
        };
    }
    let is_last = |v: u32| {
        let p = one.parent(v);
        p != NONE && last_child(p as usize) == Some(v)
    };
    let mut kids: Vec<Vec<u32>> = vec![Vec::new(); n];
    for u in 0..n as u32 {
        if !one.children(u).is_empty() {
            let whites = one.children(u);
            kids[u as usize] =
                whites[..whites.len() - 1].iter().map(|&c| bottom[c as usize]).collect();
            continue;
        }
        let mut c = u;
        while is_last(c) {
            c = one.parent(c);
            kids[u as usize].push(c);
        }
        kids[u as usize].reverse();
    }
    let mut parent = Vec::with_capacity(n);
    let mut stack: Vec<(u32, u32)> = Vec::new();
    for &r in one.roots() {
        stack.push((bottom[r as usize], NONE));
        while let Some((v, p)) = stack.pop() {
            let id = parent.len() as u32;
            parent.push(p);
            for &c in kids[v as usize].iter().rev() {
                stack.push((c, id));
            }
        }
    }
    PlaneForest::from_parents(parent).expect("depth-first numbering")
}

/// Builds the mobile forest from the one-type step multiset: `leaves` leaves
/// and `black[k]` vertices with `k + 1` children, uniformly arranged.
fn from_step_counts<R: Rng + ?Sized>(leaves: u64, black: &[u64], l: usize, rng: &mut R) -> MobileForest {
    let mut c: Vec<u32> = vec![0; leaves as usize];
    for (k, &m) in black.iter().enumerate() {
        c.extend(std::iter::repeat_n(k as u32 + 1, m as usize));
    }
    c.shuffle(rng);
    let x: Vec<i64> = c.iter().map(|&v| v as i64 - 1).collect();
    rotate_uniformly(&mut c, &x, l as i64, rng);
    let one = PlaneForest::from_child_counts(&c).expect("first-passage sequence");
    uniform_mobile_labels(two_type_from_one_type(&one), rng)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionMethod {
    /// Resample the unconditioned forest until the size matches.
    Naive,
    /// Sample the step multiset of the one-type encoding directly.
    Exact,
}

/// Exact sample of the forest law conditioned on `N^S = n`.
pub fn condition_on_size<R: Rng + ?Sized>(
    laws: &OffspringLaws,
    l: usize,
    s: SizeSymbol,
    n: u64,
    method: ConditionMethod,
    max_tries: u64,
    rng: &mut R,
) -> Result<MobileForest, BoltzmannError> {
    if l == 0 || !super::lattice::is_feasible(laws, l, s, n) {
        return Err(BoltzmannError::InfeasibleSize { l, n });
    }
    match method {
        ConditionMethod::Naive => {
            let mut counts = Vec::new();
            for _ in 0..max_tries {
                counts.clear();
                let mut sizes = ForestSizes::default();
                let ok = (0..l).all(|_| {
                    grow_tree(laws, &mut counts, &mut sizes, &|z| z.get(s) > n, rng)
                });
                if ok && sizes.get(s) == n {
                    return Ok(label(&counts, rng));
                }
            }
            Err(BoltzmannError::TriesExceeded(max_tries))
        }
        ConditionMethod::Exact => exact_conditioned(laws, l, s, n, max_tries, rng),
    }
}

fn exact_conditioned<R: Rng + ?Sized>(
    laws: &OffspringLaws,
    l: usize,
    s: SizeSymbol,
    n: u64,
    max_tries: u64,
    rng: &mut R,
) -> Result<MobileForest, BoltzmannError> {
    let a = laws.white_stop;
    let lu = l as u64;
    match s {
        SizeSymbol::E => {
            let bin = Binomial::new(n, 1.0 - a).map_err(|_| BoltzmannError::NumericalFailure("binomial"))?;
            for _ in 0..max_tries {
                let j = bin.sample(rng);
                let (black, sum) = laws.sample_black_counts(j, rng);
                if sum + j + lu == n {
                    return Ok(from_step_counts(n - j, &black, l, rng));
                }
            }
        }
        SizeSymbol::F => {
            // leaves = l + s where s is the total black out-degree; weight w(s)
            let lw = |s: u64| {
                let nn = (n + lu + s) as f64;
                (l as f64).ln() - nn.ln() + ln_binomial(nn, n as f64) + (lu + s) as f64 * a.ln()
            };
            let peak = ((a * (n + lu) as f64 - lu as f64 - 1.0) / (1.0 - a)).max(0.0).floor() as u64;
            let wmax = (peak.saturating_sub(2)..=peak + 2).map(lw).fold(f64::NEG_INFINITY, f64::max);
            for _ in 0..max_tries {
                let (black, sum) = laws.sample_black_counts(n, rng);
                if rng.random::<f64>().ln() < lw(sum) - wmax {
                    return Ok(from_step_counts(lu + sum, &black, l, rng));
                }
            }
        }
        SizeSymbol::V => {
            let gamma = Gamma::new((n + 1) as f64, (1.0 - a) / a)
                .map_err(|_| BoltzmannError::NumericalFailure("gamma"))?;
            for _ in 0..max_tries {
                let lam: f64 = gamma.sample(rng);
                let j = if lam > 0.0 {
                    Poisson::new(lam).map_err(|_| BoltzmannError::NumericalFailure("poisson"))?.sample(rng) as u64
                } else {
                    0
                };
                let (black, sum) = laws.sample_black_counts(j, rng);
                if sum + lu == n && rng.random::<f64>() * ((n + j) as f64) < n as f64 {
                    return Ok(from_step_counts(n, &black, l, rng));
                }
            }
        }
    }
    Err(BoltzmannError::TriesExceeded(max_tries))
}

/// Sizes of an unconditioned forest of `l` trees without building it.
///
/// Runs the Lukasiewicz walk of the one-type encoding. While the walk is
/// `d > 1` steps above its end level it cannot finish within `d - 1` steps,
/// so those steps are drawn as one block from their multinomial counts.
pub fn sample_forest_sizes<R: Rng + ?Sized>(laws: &OffspringLaws, l: usize, rng: &mut R) -> ForestSizes {
    sample_forest_sizes_capped(laws, l, SizeSymbol::E, u64::MAX, rng).expect("no cap")
}

/// As `sample_forest_sizes`, but gives up with `None` once `|s|` exceeds `cap`.
pub fn sample_forest_sizes_capped<R: Rng + ?Sized>(
    laws: &OffspringLaws,
    l: usize,
    s: SizeSymbol,
    cap: u64,
    rng: &mut R,
) -> Option<ForestSizes> {
    let a = laws.white_stop;
    let mut d = l as u64;
    let mut out = ForestSizes::default();
    while d > 0 {
        if out.get(s) > cap {
            return None;
        }
        let b = if d > 1 { d - 1 } else { 1 };
        let leaves = if a >= 1.0 { b } else { Binomial::new(b, a).expect("valid").sample(rng) };
        let j = b - leaves;
        let (_, sum) = laws.sample_black_counts(j, rng);
        d = d + sum + j - b;
        out.v += leaves;
        out.f += j;
        out.e += b;
    }
    (out.get(s) <= cap).then_some(out)
}

/// Colors (`true` for white) of the first `m` vertices, in depth-first order,
/// of an infinite sequence of independent mobiles.
pub fn depth_first_colors<R: Rng + ?Sized>(laws: &OffspringLaws, m: usize, rng: &mut R) -> Vec<bool> {
    let mut out = Vec::with_capacity(m);
    let mut open: Vec<u32> = Vec::new();
    while out.len() < m {
        let white = open.len().is_multiple_of(2);
        out.push(white);
        let k = if white { laws.sample_white(rng) } else { laws.sample_black(rng) };
        open.push(k);
        while let Some(r) = open.last_mut() {
            if *r == 0 {
                open.pop();
            } else {
                *r -= 1;
                break;
            }
        }
    }
    out
}
