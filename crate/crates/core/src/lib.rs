pub mod bijections;
pub mod boltzmann;
pub mod continuum;
pub mod cycle;
pub mod map;
pub mod scalar;
pub mod scaling;
pub mod stats;
pub mod trees;
pub mod util;

/// Floating-point weights, the form every sampler takes.
pub type Weights = boltzmann::WeightSequence<f64>;
/// Exact rational weights, for Boltzmann weights of enumerated maps.
pub type ExactWeights = boltzmann::WeightSequence<num_rational::BigRational>;
pub type Critical = boltzmann::CriticalData<f64>;
