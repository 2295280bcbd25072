use serde::Serialize;

use super::{BoltzmannError, SizeSymbol, WeightSequence};
use crate::scalar::Real;

/// One value per size symbol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerSymbol<T> {
    pub v: T,
    pub e: T,
    pub f: T,
}

impl<T: Copy> PerSymbol<T> {
    pub fn get(&self, s: SizeSymbol) -> T {
        match s {
            SizeSymbol::V => self.v,
            SizeSymbol::E => self.e,
            SizeSymbol::F => self.f,
        }
    }
}

/// Constants attached to an admissible weight sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalData<T> {
    /// Smallest solution `z > 1` of `f_q(z) = 1 - 1/z`.
    pub z: T,
    /// `2 + Z^3 f_q''(Z)`.
    pub rho: T,
    pub sigma2: PerSymbol<T>,
    pub a: PerSymbol<T>,
    /// `Z rho / 4`.
    pub sigma_q2: T,
    pub regular_critical: bool,
}

impl<T: Real> CriticalData<T> {
    pub fn sigma(&self, s: SizeSymbol) -> T {
        self.sigma2.get(s).sqrt()
    }

    pub fn to_f64(&self) -> CriticalData<f64> {
        let c = |x: T| x.to_f64_lossy();
        let p = |x: &PerSymbol<T>| PerSymbol { v: c(x.v), e: c(x.e), f: c(x.f) };
        CriticalData {
            z: c(self.z),
            rho: c(self.rho),
            sigma2: p(&self.sigma2),
            a: p(&self.a),
            sigma_q2: c(self.sigma_q2),
            regular_critical: self.regular_critical,
        }
    }
}

/// Safeguarded Newton iteration for an increasing function with `f(lo) < 0 < f(hi)`.
fn newton_bisect<T: Real>(
    f: impl Fn(T) -> (T, T),
    mut lo: T,
    mut hi: T,
) -> Result<T, BoltzmannError> {
    let two = T::lit(2.0);
    let mut x = (lo + hi) / two;
    for _ in 0..400 {
        let (v, d) = f(x);
        if v == T::zero() {
            return Ok(x);
        }
        if v < T::zero() {
            lo = x;
        } else {
            hi = x;
        }
        let step = x - v / d;
        let nx = if d > T::zero() && step > lo && step < hi { step } else { (lo + hi) / two };
        if (nx - x).abs() <= T::epsilon() * x.abs() * two || hi - lo <= T::epsilon() * hi * two {
            return Ok(nx);
        }
        x = nx;
    }
    Err(BoltzmannError::NumericalFailure("root finder did not converge"))
}

/// Solves `f_q(z) = 1 - 1/z` for the smallest `z > 1`.
///
/// `g(z) = f_q(z) - 1 + 1/z` is convex with `g(1) > 0`. Its minimum sits at the
/// unique root of the increasing function `z^2 f_q'(z) - 1`; the sequence is
/// regular critical when the minimum value is zero.
pub fn solve_admissibility<T: Real>(q: &WeightSequence<T>) -> Result<CriticalData<T>, BoltzmannError> {
    q.validate()?;
    let one = T::one();
    let r = q.radius();
    let g = |z: T| q.f(z) - one + one / z;
    let h = |z: T| {
        let d = q.f_derivs(z);
        (z * z * d[1] - one, T::lit(2.0) * z * d[1] + z * z * d[2])
    };
    if h(one).0 >= T::zero() {
        return Err(BoltzmannError::NotAdmissible);
    }
    // upper end of the bracket for the tangency point
    let mut hi = if r.is_finite() { one + (r - one) / T::lit(2.0) } else { T::lit(2.0) };
    loop {
        let v = h(hi).0;
        if !v.is_finite() || v > T::zero() {
            break;
        }
        if r.is_finite() {
            if r - hi <= T::epsilon() * r * T::lit(4.0) {
                break;
            }
            hi = hi + (r - hi) / T::lit(2.0);
        } else {
            hi = hi * T::lit(2.0);
            if hi > T::lit(1e12) {
                return Err(BoltzmannError::NumericalFailure("no tangency point found"));
            }
        }
    }
    let hv = h(hi).0;
    if hv.is_finite() && hv <= T::zero() {
        // g decreases all the way to the radius: a crossing may exist, never a tangency
        if g(hi) > T::zero() {
            return Err(BoltzmannError::NotAdmissible);
        }
        let z = newton_bisect(|z| (-g(z), -(h(z).0) / (z * z)), one, hi)?;
        return Ok(constants(q, z, false));
    }
    let zt = newton_bisect(
        |z| {
            let (v, d) = h(z);
            if v.is_finite() {
                (v, d)
            } else {
                (T::infinity(), T::zero())
            }
        },
        one,
        hi,
    )?;
    let gt = g(zt);
    let tol = T::lit(1e-9).max(T::epsilon() * T::lit(1000.0));
    if gt.abs() <= tol {
        return Ok(constants(q, zt, true));
    }
    if gt > T::zero() {
        return Err(BoltzmannError::NotAdmissible);
    }
    let z = newton_bisect(|z| (-g(z), -(h(z).0) / (z * z)), one, zt)?;
    Ok(constants(q, z, false))
}

fn constants<T: Real>(q: &WeightSequence<T>, z: T, regular_critical: bool) -> CriticalData<T> {
    let one = T::one();
    let d = q.f_derivs(z);
    let rho = T::lit(2.0) + z * z * z * d[2];
    CriticalData {
        z,
        rho,
        sigma2: PerSymbol { v: rho, e: rho / z, f: rho / (z - one) },
        a: PerSymbol { v: one / z, e: one, f: one - one / z },
        sigma_q2: z * rho / T::lit(4.0),
        regular_critical,
    }
}
