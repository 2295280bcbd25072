use std::collections::BTreeMap;

use serde::Serialize;

use super::{OffspringLaws, SizeSymbol};
use crate::util::{gcd, ln_binomial};

/// Additive semigroup generated by a set of positive integers (or all of them).
#[derive(Debug, Clone)]
struct Semigroup {
    gens: Vec<u64>,
    g: u64,
    reach: Vec<bool>,
}

impl Semigroup {
    fn new(mut gens: Vec<u64>) -> Self {
        gens.retain(|&x| x > 0);
        gens.sort_unstable();
        gens.dedup();
        let g = gens.iter().fold(0, |acc, &x| gcd(acc, x));
        let bound = match (gens.first(), gens.last()) {
            (Some(&lo), Some(&hi)) => (lo * hi / g.max(1) + hi) as usize,
            _ => 0,
        };
        let mut reach = vec![false; bound + 1];
        reach[0] = true;
        for m in 1..=bound {
            reach[m] = gens.iter().any(|&x| x as usize <= m && reach[m - x as usize]);
        }
        Semigroup { gens, g, reach }
    }

    fn contains(&self, m: u64) -> bool {
        if m == 0 {
            return true;
        }
        if self.gens.is_empty() || !m.is_multiple_of(self.g) {
            return false;
        }
        self.reach.get(m as usize).copied().unwrap_or(true)
    }

    /// Largest multiple of `g` outside the semigroup, divided by `g` (`-1` if none).
    fn frobenius(&self) -> i64 {
        (0..self.reach.len()).rev().find(|&m| (m as u64).is_multiple_of(self.g.max(1)) && !self.reach[m]).map_or(-1, |m| (m as u64 / self.g) as i64)
    }
}

/// Black out-degrees with positive probability; `None` for infinite support.
fn black_support(laws: &OffspringLaws) -> Vec<u64> {
    laws.black_pmf.iter().enumerate().filter(|(_, &p)| p > 0.0).map(|(k, _)| k as u64).collect()
}

/// Semigroup `G` with `{N^S} = l * eps + G` (for S = V, E).
fn size_semigroup(laws: &OffspringLaws, s: SizeSymbol) -> Semigroup {
    let d = black_support(laws);
    match s {
        SizeSymbol::V => Semigroup::new(d),
        SizeSymbol::E => Semigroup::new(d.iter().map(|k| k + 1).collect()),
        SizeSymbol::F => Semigroup::new(vec![1]),
    }
}

/// Whether `N^S = n` has positive probability for a forest of `l` trees.
pub fn is_feasible(laws: &OffspringLaws, l: usize, s: SizeSymbol, n: u64) -> bool {
    match s {
        SizeSymbol::F => true,
        _ => n >= l as u64 && size_semigroup(laws, s).contains(n - l as u64),
    }
}

/// `{n : P(N^S = n) > 0} = R_l ∪ (beta*l + h*Z_+)` for a forest of `l` trees.
#[derive(Debug, Clone, Serialize)]
pub struct SupportLattice {
    pub symbol: SizeSymbol,
    pub h: u64,
    pub beta: u64,
    /// Exceptional sizes below `beta * l`, per tested `l`.
    pub exceptional: BTreeMap<usize, Vec<u64>>,
}

impl SupportLattice {
    pub fn contains(&self, l: usize, n: u64) -> bool {
        let base = self.beta * l as u64;
        if n >= base {
            (n - base).is_multiple_of(self.h)
        } else {
            self.exceptional.get(&l).is_some_and(|r| r.contains(&n))
        }
    }
}

pub fn support_lattice(laws: &OffspringLaws, s: SizeSymbol, ls: &[usize]) -> SupportLattice {
    if s == SizeSymbol::F {
        return SupportLattice { symbol: s, h: 1, beta: 0, exceptional: ls.iter().map(|&l| (l, vec![])).collect() };
    }
    let sg = size_semigroup(laws, s);
    let h = sg.g.max(1);
    let beta = 1 + h * (sg.frobenius() + 1) as u64;
    let exceptional = ls
        .iter()
        .map(|&l| {
            let r = (l as u64..beta * l as u64).filter(|&n| sg.contains(n - l as u64)).collect();
            (l, r)
        })
        .collect();
    SupportLattice { symbol: s, h, beta, exceptional }
}

/// `p^{*m}` truncated to degrees `<= deg`.
fn convolution_power(p: &[f64], m: u64, deg: usize) -> Vec<f64> {
    let mul = |x: &[f64], y: &[f64]| {
        let mut out = vec![0.0; (x.len() + y.len() - 1).min(deg + 1)];
        for (i, &a) in x.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate().take(out.len().saturating_sub(i)) {
                out[i + j] += a * b;
            }
        }
        out
    };
    let mut result = vec![1.0];
    let mut base: Vec<f64> = p.iter().copied().take(deg + 1).collect();
    let mut e = m;
    while e > 0 {
        if e & 1 == 1 {
            result = mul(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base);
        }
    }
    result
}

/// `P(N^S = n)` for a forest of `l` independent trees, by exact summation
/// over the one-type encoding (leaves are white vertices, inner vertices black).
pub fn exact_size_probability(laws: &OffspringLaws, l: usize, s: SizeSymbol, n: u64) -> f64 {
    if !is_feasible(laws, l, s, n) {
        return 0.0;
    }
    let a = laws.white_stop;
    let lf = l as f64;
    let nf = n as f64;
    let mu: Vec<f64> = laws.black_pmf.clone();
    match s {
        SizeSymbol::E => {
            // (l/n) P(sum of n one-type offspring = n - l)
            let mut nu = vec![a];
            nu.extend(mu.iter().map(|p| (1.0 - a) * p));
            let target = (n - l as u64) as usize;
            let c = convolution_power(&nu, n, target);
            lf / nf * c.get(target).copied().unwrap_or(0.0)
        }
        SizeSymbol::F => {
            // black total out-degree s, then l + s leaves
            let mean: f64 = mu.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
            let var: f64 = mu.iter().enumerate().map(|(k, p)| (k as f64 - mean).powi(2) * p).sum();
            let smax = (nf * mean + 40.0 * (nf * var).sqrt() + 50.0) as usize;
            let c = convolution_power(&mu, n, smax);
            let mut total = 0.0;
            for (s, &p) in c.iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                let nn = nf + lf + s as f64;
                let lw = (lf / nn).ln() + ln_binomial(nn, nf) + (lf + s as f64) * a.ln() + nf * (1.0 - a).ln();
                total += (lw + p.ln()).exp();
            }
            total
        }
        SizeSymbol::V => {
            // j black vertices whose out-degrees sum to n - l
            let target = (n - l as u64) as usize;
            let mut conv = vec![1.0f64];
            let mut total = 0.0;
            let mut j = 0u64;
            let mut best = 0.0f64;
            loop {
                if let Some(&p) = conv.get(target) {
                    if p > 0.0 {
                        let jf = j as f64;
                        let lw = (lf / (nf + jf)).ln() + ln_binomial(nf + jf, jf) + nf * a.ln() + jf * (1.0 - a).ln();
                        let t = (lw + p.ln()).exp();
                        total += t;
                        best = best.max(t);
                        if t < 1e-18 * best && jf > nf * (1.0 - a) / a {
                            break;
                        }
                    }
                }
                if mu[0] == 0.0 && j as usize >= target {
                    break;
                }
                if j > 50 * (n + 10) {
                    break;
                }
                let mut next = vec![0.0; (conv.len() + mu.len() - 1).min(target + 1)];
                for (i, &x) in conv.iter().enumerate() {
                    for (k, &m) in mu.iter().enumerate().take(next.len().saturating_sub(i)) {
                        next[i + k] += x * m;
                    }
                }
                conv = next;
                j += 1;
            }
            total
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boltzmann::{solve_admissibility, WeightSequence};
    use crate::trees::enumerate_plane_forests;
    use std::collections::BTreeSet;

    fn laws(q: WeightSequence<f64>) -> OffspringLaws {
        OffspringLaws::new(&q, &solve_admissibility(&q).unwrap()).unwrap()
    }

    #[test]
    fn quadrangulation_lattices() {
        let lw = laws(WeightSequence::quadrangulation());
        let h = |s| support_lattice(&lw, s, &[1, 2, 3]);
        assert_eq!(h(SizeSymbol::F).h, 1);
        assert_eq!(h(SizeSymbol::E).h, 2);
        assert_eq!(h(SizeSymbol::V).h, 1);
        assert!(!is_feasible(&lw, 2, SizeSymbol::E, 7));
        assert!(is_feasible(&lw, 2, SizeSymbol::E, 8));
    }

    #[test]
    fn hexangulation_lattices() {
        let lw = laws(WeightSequence::two_p_angulation(3));
        assert_eq!(support_lattice(&lw, SizeSymbol::E, &[1]).h, 3);
        assert_eq!(support_lattice(&lw, SizeSymbol::V, &[1]).h, 2);
        assert_eq!(support_lattice(&lw, SizeSymbol::F, &[1]).beta, 0);
    }

    /// Sizes attained by two-type forests with at most `max_vertices` vertices
    /// whose black out-degrees are allowed.
    fn enumerated_sizes(lw: &OffspringLaws, l: usize, s: SizeSymbol, max_vertices: usize) -> BTreeSet<u64> {
        let allowed: BTreeSet<u64> = black_support(lw).into_iter().collect();
        let mut out = BTreeSet::new();
        for n in l..=max_vertices {
            for f in enumerate_plane_forests(l, n - l) {
                let ok = (0..f.num_vertices() as u32)
                    .filter(|&v| !f.is_white(v))
                    .all(|b| allowed.contains(&(f.children(b).len() as u64)));
                if ok {
                    let v = (0..f.num_vertices() as u32).filter(|&v| f.is_white(v)).count() as u64;
                    let e = f.num_vertices() as u64;
                    out.insert(match s {
                        SizeSymbol::V => v,
                        SizeSymbol::E => e,
                        SizeSymbol::F => e - v,
                    });
                }
            }
        }
        out
    }

    #[test]
    fn lattice_agrees_with_enumeration() {
        for q in [WeightSequence::quadrangulation(), WeightSequence::two_p_angulation(3)] {
            let lw = laws(q);
            for l in 1..=2 {
                for s in SizeSymbol::ALL {
                    let lat = support_lattice(&lw, s, &[l]);
                    let got = enumerated_sizes(&lw, l, s, 9);
                    for &n in &got {
                        assert!(lat.contains(l, n), "{s:?} l={l} n={n}");
                    }
                    let diffs = got.iter().zip(got.iter().skip(1)).map(|(a, b)| b - a);
                    let h = diffs.fold(0, gcd);
                    assert_eq!(h, lat.h, "{s:?} l={l}");
                }
            }
        }
    }

    #[test]
    fn quadrangulation_size_laws_closed_form() {
        let lw = laws(WeightSequence::quadrangulation());
        let c = |n: f64, k: f64| ln_binomial(n, k);
        for (l, n) in [(1usize, 3u64), (2, 5), (4, 40), (8, 200)] {
            let (lf, nf) = (l as f64, n as f64);
            // F: n blacks, n + l whites
            let f = (lf / (2.0 * nf + lf)).ln() + c(2.0 * nf + lf, nf) - (2.0 * nf + lf) * 2f64.ln();
            let got = exact_size_probability(&lw, l, SizeSymbol::F, n);
            assert!((got - f.exp()).abs() < 1e-10 * f.exp(), "F l={l} n={n}");
            // V: n whites, n - l blacks
            if n >= l as u64 {
                let v = (lf / (2.0 * nf - lf)).ln() + c(2.0 * nf - lf, nf - lf) - (2.0 * nf - lf) * 2f64.ln();
                let got = exact_size_probability(&lw, l, SizeSymbol::V, n);
                assert!((got - v.exp()).abs() < 1e-10 * v.exp(), "V l={l} n={n}");
            }
            // E: binary one-type forest with n vertices
            let ne = 2 * n + l as u64;
            let nef = ne as f64;
            let e = (lf / nef).ln() + c(nef, (nef - lf) / 2.0) - nef * 2f64.ln();
            let got = exact_size_probability(&lw, l, SizeSymbol::E, ne);
            assert!((got - e.exp()).abs() < 1e-10 * e.exp(), "E l={l} n={ne}");
            assert_eq!(exact_size_probability(&lw, l, SizeSymbol::E, ne + 1), 0.0);
        }
    }

    #[test]
    fn size_laws_sum_to_one_for_light_cases() {
        // V under hexangulation weights with l = 1 has a heavy tail; check partial sums grow toward 1
        let lw = laws(WeightSequence::uniform_bipartite());
        let total: f64 = (0..40).map(|n| exact_size_probability(&lw, 1, SizeSymbol::F, n)).sum();
        assert!(total > 0.85 && total < 1.0, "{total}");
        let tv: f64 = (1..40).map(|n| exact_size_probability(&lw, 1, SizeSymbol::V, n)).sum();
        assert!(tv > 0.85 && tv < 1.0, "{tv}");
    }
}
