use rand::Rng;
use serde::Serialize;
use serde_json::json;

use super::ScalingError;
use crate::bijections::{boundary_forward, reroot_uniform_pointed, PointedMap};
use crate::boltzmann::{is_feasible, BoltzmannModel, SizeSymbol, WeightSequence};
use crate::trees::uniform_labeled_forest;

#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind {
    /// Uniform element of `Q_{l,n}`, with `n` internal faces.
    UniformQuadrangulation,
    /// Boltzmann map conditioned on `|S| = n`.
    Boltzmann { weights: WeightSequence<f64>, symbol: SizeSymbol },
}

/// How the half-perimeter `l_n` depends on the size `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum LRule {
    /// `l_n = round(L sigma_S sqrt(n))`.
    Scaled { perimeter: f64 },
    /// `l_n = round(c n^exponent)`.
    Power { c: f64, exponent: f64 },
    Fixed { l: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub l_rule: LRule,
}

impl ModelSpec {
    pub fn quadrangulations(perimeter: f64) -> Self {
        ModelSpec { kind: ModelKind::UniformQuadrangulation, l_rule: LRule::Scaled { perimeter } }
    }

    pub fn boltzmann(weights: WeightSequence<f64>, symbol: SizeSymbol, perimeter: f64) -> Self {
        ModelSpec { kind: ModelKind::Boltzmann { weights, symbol }, l_rule: LRule::Scaled { perimeter } }
    }

    pub fn describe(&self) -> serde_json::Value {
        let kind = match &self.kind {
            ModelKind::UniformQuadrangulation => json!({"kind": "uniform_quadrangulation"}),
            ModelKind::Boltzmann { weights, symbol } => {
                json!({"kind": "boltzmann", "weights": weights.to_string(), "symbol": symbol})
            }
        };
        json!({"model": kind, "l_rule": self.l_rule})
    }
}

/// Perimeter chosen for a size, with the raw value before the lattice adjustment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerimeterChoice {
    pub l: usize,
    pub raw: usize,
    pub adjusted: bool,
}

/// One sampled pointed map and its weight relative to the unpointed law.
#[derive(Debug, Clone)]
pub struct MapSample {
    pub pointed: PointedMap,
    pub weight: f64,
}

/// A model ready for sampling.
#[derive(Debug, Clone)]
pub struct Model {
    pub spec: ModelSpec,
    pub boltzmann: Option<BoltzmannModel>,
    pub symbol: SizeSymbol,
    /// `sigma_S^2` for the conditioning symbol.
    pub sigma2: f64,
}

const MAX_TRIES: u64 = 1 << 40;

impl Model {
    pub fn new(spec: ModelSpec) -> Result<Self, ScalingError> {
        match &spec.kind {
            ModelKind::UniformQuadrangulation => Ok(Model { spec, boltzmann: None, symbol: SizeSymbol::F, sigma2: 2.0 }),
            ModelKind::Boltzmann { weights, symbol } => {
                let bm = BoltzmannModel::new(weights.clone())?;
                let sigma2 = bm.critical.sigma2.get(*symbol);
                let symbol = *symbol;
                Ok(Model { spec, boltzmann: Some(bm), symbol, sigma2 })
            }
        }
    }

    /// `(4 sigma_S^2 n / 9)^{1/4}`, the distance scale at size `n`.
    pub fn scaling_constant(&self, n: u64) -> f64 {
        (4.0 * self.sigma2 * n as f64 / 9.0).powf(0.25)
    }

    fn feasible(&self, l: usize, n: u64) -> bool {
        match &self.boltzmann {
            None => l >= 1,
            Some(bm) => l >= 1 && is_feasible(&bm.laws, l, self.symbol, n),
        }
    }

    /// `l_n` from the rule, moved to the nearest feasible value (smaller first on ties).
    pub fn perimeter_for(&self, n: u64) -> Result<PerimeterChoice, ScalingError> {
        let raw = match self.spec.l_rule {
            LRule::Scaled { perimeter } => (perimeter * (self.sigma2 * n as f64).sqrt()).round(),
            LRule::Power { c, exponent } => (c * (n as f64).powf(exponent)).round(),
            LRule::Fixed { l } => l as f64,
        };
        let raw = raw.max(1.0) as usize;
        for delta in 0..64usize {
            for l in [raw.checked_sub(delta), raw.checked_add(delta)].into_iter().flatten() {
                if self.feasible(l, n) {
                    return Ok(PerimeterChoice { l, raw, adjusted: delta > 0 });
                }
            }
        }
        Err(ScalingError::InfeasibleSize { l: raw, n })
    }

    /// A pointed map of size `n`. Under the uniform quadrangulation model the
    /// distinguished vertex is uniform given the map; Boltzmann samples carry
    /// weight `1 / |V|` to undo the pointing (constant when `S = V`).
    pub fn sample<R: Rng + ?Sized>(&self, l: usize, n: u64, rng: &mut R) -> Result<MapSample, ScalingError> {
        match &self.boltzmann {
            None => {
                let forest = uniform_labeled_forest(l, n as usize, rng);
                let pm = boundary_forward(&forest).map_err(|e| ScalingError::Invariant(e.to_string()))?;
                Ok(MapSample { pointed: reroot_uniform_pointed(&pm, rng), weight: 1.0 })
            }
            Some(bm) => {
                let pointed = bm.sample_conditioned(l, self.symbol, n, MAX_TRIES, rng)?;
                let weight = match self.symbol {
                    SizeSymbol::V => 1.0,
                    _ => 1.0 / pointed.map.num_vertices() as f64,
                };
                Ok(MapSample { pointed, weight })
            }
        }
    }
}
