//! Statistical comparison of discrete samples with their continuum limits:
//! rescaled two-point laws, diameter growth, cross-model universality, the
//! encoding processes and the Boltzmann perimeter law.

mod encoding;
mod gh;
mod measure;
mod model;
mod report;

use thiserror::Error;

use crate::boltzmann::BoltzmannError;
use crate::continuum::ContinuumError;

pub use encoding::{
    boltzmann_perimeter_law, concentration_check, encoding_limit_check, ConcentrationReport, EncodingReport,
    MarginalKs, PerimeterRow,
};
pub use gh::{gh_proxy, FiniteMetric, GhBound};
pub use measure::{
    diameter_exponent, measure_maps, two_point, universality_compare, weighted_mean, weighted_quantile,
    ExponentFit, MapMeasure, QuantileGap, SizePoint, TwoPoint, UniversalityReport,
};
pub use model::{LRule, MapSample, Model, ModelKind, ModelSpec, PerimeterChoice};
pub use report::{scaling_run, ScalingReport, StatRow};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScalingError {
    #[error(transparent)]
    Boltzmann(#[from] BoltzmannError),
    #[error(transparent)]
    Continuum(#[from] ContinuumError),
    #[error("no feasible perimeter near l = {l} for size {n}")]
    InfeasibleSize { l: usize, n: u64 },
    #[error("need at least 4 sizes for an exponent fit, got {0}")]
    InsufficientSizes(usize),
    #[error("this diagnostic needs a Boltzmann model")]
    NeedsBoltzmann,
    #[error("invariant violated: {0}")]
    Invariant(String),
}

#[cfg(test)]
mod tests;
