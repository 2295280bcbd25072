use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Num;
use serde::{Deserialize, Serialize};

use super::BoltzmannError;
use crate::map::PlaneMap;
use crate::scalar::Real;
use crate::util::binomial;

/// Face weights `q_k` for faces of degree `2k`, `k >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSequence<T> {
    /// Finitely many non-zero weights.
    Finite(BTreeMap<usize, T>),
    /// `q_k = a^k` for every `k >= 1`.
    Geometric { a: T },
}

impl<T: Num + Clone + PartialOrd> WeightSequence<T> {
    pub fn q(&self, k: usize) -> T {
        match self {
            WeightSequence::Finite(m) => m.get(&k).cloned().unwrap_or_else(T::zero),
            WeightSequence::Geometric { a } => num_traits::pow(a.clone(), k),
        }
    }

    pub fn validate(&self) -> Result<(), BoltzmannError> {
        match self {
            WeightSequence::Finite(m) => {
                if m.iter().any(|(&k, v)| k == 0 || *v < T::zero()) {
                    return Err(BoltzmannError::InvalidWeights("weights must be >= 0, indexed from 1"));
                }
                if !m.iter().any(|(&k, v)| k >= 2 && *v > T::zero()) {
                    return Err(BoltzmannError::InvalidWeights("need q_k > 0 for some k >= 2"));
                }
            }
            WeightSequence::Geometric { a } => {
                if *a <= T::zero() {
                    return Err(BoltzmannError::InvalidWeights("geometric parameter must be > 0"));
                }
            }
        }
        Ok(())
    }

    /// Indices `k` with `q_k > 0`, or `None` when there are infinitely many.
    pub fn support(&self) -> Option<Vec<usize>> {
        match self {
            WeightSequence::Finite(m) => {
                Some(m.iter().filter(|(_, v)| **v > T::zero()).map(|(&k, _)| k).collect())
            }
            WeightSequence::Geometric { .. } => None,
        }
    }
}

/// `C(2k+1, k)` as a float.
fn central(k: usize) -> f64 {
    if k < 60 {
        binomial(2 * k + 1, k) as f64
    } else {
        crate::util::ln_binomial((2 * k + 1) as f64, k as f64).exp()
    }
}

impl<T: Real> WeightSequence<T> {
    /// Radius of convergence of `f_q`.
    pub fn radius(&self) -> T {
        match self {
            WeightSequence::Finite(_) => T::infinity(),
            WeightSequence::Geometric { a } => T::one() / (T::lit(4.0) * *a),
        }
    }

    /// `f_q` and its first two derivatives at `x >= 0` (infinite past the radius).
    pub fn f_derivs(&self, x: T) -> [T; 3] {
        match self {
            WeightSequence::Finite(m) => {
                let mut out = [T::zero(); 3];
                for (&k1, &q) in m {
                    let k = k1 - 1;
                    let c = T::lit(central(k)) * q;
                    let kt = T::lit(k as f64);
                    out[0] = out[0] + c * x.powi(k as i32);
                    if k >= 1 {
                        out[1] = out[1] + c * kt * x.powi(k as i32 - 1);
                    }
                    if k >= 2 {
                        out[2] = out[2] + c * kt * (kt - T::one()) * x.powi(k as i32 - 2);
                    }
                }
                out
            }
            WeightSequence::Geometric { a } => {
                let a = *a;
                if x >= self.radius() {
                    return [T::infinity(); 3];
                }
                let g = central_series(a * x);
                [a * g[0], a * a * g[1], a * a * a * g[2]]
            }
        }
    }

    pub fn f(&self, x: T) -> T {
        self.f_derivs(x)[0]
    }
}

/// `G(y) = sum_k C(2k+1,k) y^k = ((1-4y)^{-1/2} - 1) / (2y)` and two derivatives.
fn central_series<T: Real>(y: T) -> [T; 3] {
    if y < T::lit(1e-3) {
        let mut out = [T::zero(); 3];
        for k in 0..40usize {
            let c = T::lit(central(k));
            let kt = T::lit(k as f64);
            out[0] = out[0] + c * y.powi(k as i32);
            if k >= 1 {
                out[1] = out[1] + c * kt * y.powi(k as i32 - 1);
            }
            if k >= 2 {
                out[2] = out[2] + c * kt * (kt - T::one()) * y.powi(k as i32 - 2);
            }
        }
        return out;
    }
    let u = (T::one() - T::lit(4.0) * y).powf(T::lit(-0.5));
    let n0 = u - T::one();
    let n1 = T::lit(2.0) * u.powi(3);
    let n2 = T::lit(12.0) * u.powi(5);
    let two = T::lit(2.0);
    [
        n0 / (two * y),
        n1 / (two * y) - n0 / (two * y * y),
        n2 / (two * y) - n1 / (y * y) + n0 / (y * y * y),
    ]
}

impl WeightSequence<f64> {
    /// Critical weights for `2p`-angulations.
    pub fn two_p_angulation(p: usize) -> Self {
        assert!(p >= 2);
        let pf = p as f64;
        let c = (pf - 1.0).powi(p as i32 - 1) / (pf.powi(p as i32) * binomial(2 * p - 1, p) as f64);
        WeightSequence::Finite(BTreeMap::from([(p, c)]))
    }

    pub fn quadrangulation() -> Self {
        Self::two_p_angulation(2)
    }

    /// `q_k = 8^{-k}`: every bipartite map with perimeter `2l` gets weight `8^{l-|E|}`.
    pub fn uniform_bipartite() -> Self {
        WeightSequence::Geometric { a: 0.125 }
    }

    /// Converts to another scalar type.
    pub fn cast<U: Real>(&self) -> WeightSequence<U> {
        match self {
            WeightSequence::Finite(m) => {
                WeightSequence::Finite(m.iter().map(|(&k, &v)| (k, U::lit(v))).collect())
            }
            WeightSequence::Geometric { a } => WeightSequence::Geometric { a: U::lit(*a) },
        }
    }
}

/// JSON form: `{"delta": {"2": 0.0833}}` or `{"geometric": {"a": 0.125}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightJson {
    Delta(BTreeMap<usize, f64>),
    Geometric { a: f64 },
}

impl From<&WeightSequence<f64>> for WeightJson {
    fn from(w: &WeightSequence<f64>) -> Self {
        match w {
            WeightSequence::Finite(m) => WeightJson::Delta(m.clone()),
            WeightSequence::Geometric { a } => WeightJson::Geometric { a: *a },
        }
    }
}

impl From<WeightJson> for WeightSequence<f64> {
    fn from(j: WeightJson) -> Self {
        match j {
            WeightJson::Delta(m) => WeightSequence::Finite(m),
            WeightJson::Geometric { a } => WeightSequence::Geometric { a },
        }
    }
}

impl fmt::Display for WeightSequence<f64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSequence::Geometric { a } => write!(f, "geometric:a={a}"),
            WeightSequence::Finite(m) => {
                let parts: Vec<String> = m.iter().map(|(k, v)| format!("{k}={v}")).collect();
                write!(f, "delta:{}", parts.join(","))
            }
        }
    }
}

/// Parses `quadrangulation`, `2p:3`, `uniform`, `geometric:a=0.125`,
/// `delta:2=0.0833,3=0.01`, or a JSON object.
impl FromStr for WeightSequence<f64> {
    type Err = BoltzmannError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BoltzmannError::Parse(s.to_string());
        let s = s.trim();
        let w = if s.starts_with('{') {
            serde_json::from_str::<WeightJson>(s).map_err(|_| BoltzmannError::Parse(s.to_string()))?.into()
        } else if s == "quadrangulation" || s == "quad" {
            Self::quadrangulation()
        } else if s == "uniform" {
            Self::uniform_bipartite()
        } else if let Some(p) = s.strip_prefix("2p:") {
            let p: usize = p.parse().map_err(|_| bad())?;
            if p < 2 {
                return Err(BoltzmannError::Parse(s.to_string()));
            }
            Self::two_p_angulation(p)
        } else if let Some(a) = s.strip_prefix("geometric:a=") {
            WeightSequence::Geometric { a: a.parse().map_err(|_| bad())? }
        } else if let Some(rest) = s.strip_prefix("delta:") {
            let mut m = BTreeMap::new();
            for part in rest.split(',') {
                let (k, v) = part.split_once('=').ok_or(BoltzmannError::Parse(s.to_string()))?;
                m.insert(k.trim().parse().map_err(|_| bad())?, v.trim().parse().map_err(|_| bad())?);
            }
            WeightSequence::Finite(m)
        } else {
            return Err(BoltzmannError::Parse(s.to_string()));
        };
        w.validate()?;
        Ok(w)
    }
}

/// `W(q; m)`: product of `q_{deg(f)/2}` over the faces other than the root face.
pub fn boltzmann_weight<W: Num + Clone + PartialOrd>(
    map: &PlaneMap,
    q: &WeightSequence<W>,
) -> Result<W, BoltzmannError> {
    let mut w = W::one();
    for d in map.internal_face_degrees() {
        if d % 2 == 1 {
            return Err(BoltzmannError::OddFace(d));
        }
        w = w * q.q(d / 2);
        if w.is_zero() {
            break;
        }
    }
    Ok(w)
}
