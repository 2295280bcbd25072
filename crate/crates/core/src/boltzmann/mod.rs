//! Boltzmann bipartite maps with a boundary: weight sequences, the critical
//! constants attached to them, and exact samplers through random mobiles.

mod lattice;
mod laws;
mod sample;
mod solver;
mod weights;

use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bijections::{bdg_forward, reroot_uniform_pointed, PointedMap};

pub use lattice::{exact_size_probability, is_feasible, support_lattice, SupportLattice};
pub use laws::OffspringLaws;
pub use sample::{
    condition_on_size, depth_first_colors, sample_forest_sizes, sample_forest_sizes_capped, sample_mobile_forest,
    two_type_from_one_type, ConditionMethod, ForestSizes,
};
pub use solver::{solve_admissibility, CriticalData, PerSymbol};
pub use weights::{boltzmann_weight, WeightJson, WeightSequence};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoltzmannError {
    #[error("invalid weight sequence: {0}")]
    InvalidWeights(&'static str),
    #[error("cannot parse weight sequence {0:?}")]
    Parse(String),
    #[error("weight sequence is not admissible")]
    NotAdmissible,
    #[error("weight sequence is admissible but not regular critical")]
    NotCritical,
    #[error("numerical failure: {0}")]
    NumericalFailure(&'static str),
    #[error("map has a face of odd degree {0}")]
    OddFace(usize),
    #[error("size {n} is not attainable with {l} boundary trees")]
    InfeasibleSize { l: usize, n: u64 },
    #[error("no sample accepted after {0} tries")]
    TriesExceeded(u64),
    #[error("forest exceeded the size cap {0}")]
    ResampleExceeded(u64),
}

/// How the size of a map is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SizeSymbol {
    /// Vertices (minus one, on the mobile side).
    V,
    /// Edges.
    E,
    /// Internal faces.
    F,
}

impl SizeSymbol {
    pub const ALL: [SizeSymbol; 3] = [SizeSymbol::V, SizeSymbol::E, SizeSymbol::F];
}

impl FromStr for SizeSymbol {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "V" | "v" => Ok(SizeSymbol::V),
            "E" | "e" => Ok(SizeSymbol::E),
            "F" | "f" => Ok(SizeSymbol::F),
            _ => Err(format!("unknown size symbol {s:?}")),
        }
    }
}

/// A regular critical weight sequence with everything needed for sampling.
#[derive(Debug, Clone)]
pub struct BoltzmannModel {
    pub q: WeightSequence<f64>,
    pub critical: CriticalData<f64>,
    pub laws: OffspringLaws,
}

impl BoltzmannModel {
    pub fn new(q: WeightSequence<f64>) -> Result<Self, BoltzmannError> {
        let critical = solve_admissibility(&q)?;
        if !critical.regular_critical {
            return Err(BoltzmannError::NotCritical);
        }
        let laws = OffspringLaws::new(&q, &critical)?;
        Ok(BoltzmannModel { q, critical, laws })
    }

    /// Pointed Boltzmann map of perimeter `2l`, re-rooted uniformly on the boundary.
    pub fn sample_pointed<R: Rng + ?Sized>(&self, l: usize, cap: u64, rng: &mut R) -> Result<PointedMap, BoltzmannError> {
        let mf = sample_mobile_forest(&self.laws, l, cap, rng)?;
        let pm = bdg_forward(&mf).map_err(|_| BoltzmannError::NumericalFailure("bijection"))?;
        Ok(reroot_uniform_pointed(&pm, rng))
    }

    /// Pointed map conditioned on `|S| = n` (with `|V| - 1` for `S = V`).
    pub fn sample_conditioned<R: Rng + ?Sized>(
        &self,
        l: usize,
        s: SizeSymbol,
        n: u64,
        max_tries: u64,
        rng: &mut R,
    ) -> Result<PointedMap, BoltzmannError> {
        let mf = condition_on_size(&self.laws, l, s, n, ConditionMethod::Exact, max_tries, rng)?;
        let pm = bdg_forward(&mf).map_err(|_| BoltzmannError::NumericalFailure("bijection"))?;
        Ok(reroot_uniform_pointed(&pm, rng))
    }
}
