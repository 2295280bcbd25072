use rand::Rng;
use rand_distr::{Binomial, Distribution, Geometric};

use super::{BoltzmannError, CriticalData, WeightSequence};
use crate::util::ln_binomial;

const MAX_TABLE: usize = 1 << 16;

/// Offspring distributions of the two-type Galton-Watson forest.
#[derive(Debug, Clone)]
pub struct OffspringLaws {
    pub z: f64,
    /// `mu_white(k) = (1/Z)(1 - 1/Z)^k`.
    pub white_stop: f64,
    /// `mu_black(k) = Z^k C(2k+1,k) q_{k+1} / f_q(Z)`, tabulated.
    pub black_pmf: Vec<f64>,
    black_cdf: Vec<f64>,
    q: WeightSequence<f64>,
    fz: f64,
    finite: bool,
}

impl OffspringLaws {
    pub fn new(q: &WeightSequence<f64>, cd: &CriticalData<f64>) -> Result<Self, BoltzmannError> {
        q.validate()?;
        let z = cd.z;
        let fz = q.f(z);
        let finite = q.support().is_some();
        let mut laws = OffspringLaws {
            z,
            white_stop: 1.0 / z,
            black_pmf: Vec::new(),
            black_cdf: Vec::new(),
            q: q.clone(),
            fz,
            finite,
        };
        let kmax = match q.support() {
            Some(s) => s.iter().max().copied().unwrap_or(1) - 1,
            None => usize::MAX,
        };
        let mut acc = 0.0;
        let mut k = 0;
        while k <= kmax {
            let p = laws.black_mass(k);
            acc += p;
            laws.black_pmf.push(p);
            laws.black_cdf.push(acc);
            // heavy tails are left to the direct walk in `sample_black`
            if !finite && k > 4 && (1.0 - acc < 1e-17 || k >= MAX_TABLE) {
                break;
            }
            k += 1;
        }
        Ok(laws)
    }

    /// `mu_black(k)`, computed directly (also past the table).
    pub fn black_mass(&self, k: usize) -> f64 {
        let qk = self.q.q(k + 1);
        if qk == 0.0 {
            return 0.0;
        }
        let ln = k as f64 * self.z.ln() + ln_binomial((2 * k + 1) as f64, k as f64) + qk.ln() - self.fz.ln();
        ln.exp()
    }

    pub fn white_mass(&self, k: usize) -> f64 {
        self.white_stop * (1.0 - self.white_stop).powi(k as i32)
    }

    pub fn white_mean(&self) -> f64 {
        self.z - 1.0
    }

    /// Mean of `mu_black` (tabulated part plus a direct tail sum).
    pub fn black_mean(&self) -> f64 {
        let mut m: f64 = self.black_pmf.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
        if !self.finite {
            let mut k = self.black_pmf.len();
            loop {
                let t = k as f64 * self.black_mass(k);
                m += t;
                if t < 1e-18 {
                    break;
                }
                k += 1;
            }
        }
        m
    }

    pub fn sample_white<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        if self.white_stop >= 1.0 {
            return 0;
        }
        Geometric::new(self.white_stop).expect("probability in (0,1]").sample(rng) as u32
    }

    pub fn sample_black<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        let u: f64 = rng.random();
        let i = self.black_cdf.partition_point(|&c| c <= u);
        if i < self.black_cdf.len() {
            return i as u32;
        }
        if self.finite {
            return (self.black_cdf.len() - 1) as u32;
        }
        // walk the tail past the table
        let mut acc = *self.black_cdf.last().unwrap();
        let mut k = self.black_cdf.len();
        loop {
            acc += self.black_mass(k);
            if acc > u || k > self.black_cdf.len() + 1_000_000 {
                return k as u32;
            }
            k += 1;
        }
    }

    /// Counts `N_k` of a multinomial sample of size `j` from `mu_black`,
    /// by sequential binomial splitting. Returns `(counts, sum k N_k)`.
    pub fn sample_black_counts<R: Rng + ?Sized>(&self, j: u64, rng: &mut R) -> (Vec<u64>, u64) {
        let mut counts = Vec::new();
        let mut left = j;
        let mut mass = 1.0;
        let mut sum = 0u64;
        let mut k = 0usize;
        while left > 0 {
            let p = if k < self.black_pmf.len() { self.black_pmf[k] } else { self.black_mass(k) };
            let last = self.finite && k + 1 == self.black_pmf.len();
            let pr = if last || mass <= 0.0 { 1.0 } else { (p / mass).clamp(0.0, 1.0) };
            let c = if pr >= 1.0 { left } else { Binomial::new(left, pr).expect("valid").sample(rng) };
            counts.push(c);
            sum += c * k as u64;
            left -= c;
            mass -= p;
            k += 1;
        }
        (counts, sum)
    }
}
