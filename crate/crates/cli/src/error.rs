use bdlab::boltzmann::BoltzmannError;
use bdlab::continuum::ContinuumError;
use bdlab::scaling::ScalingError;

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Infeasible(String),
    Invariant(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Invariant(_) => 4,
            CliError::Io(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Infeasible(m) | CliError::Invariant(m) | CliError::Io(m) => m,
        }
    }
}

impl From<BoltzmannError> for CliError {
    fn from(e: BoltzmannError) -> Self {
        use BoltzmannError::*;
        let m = e.to_string();
        match e {
            Parse(_) | InvalidWeights(_) => CliError::Usage(m),
            NotAdmissible | NotCritical | InfeasibleSize { .. } | TriesExceeded(_) | ResampleExceeded(_) => {
                CliError::Infeasible(m)
            }
            NumericalFailure(_) | OddFace(_) => CliError::Invariant(m),
        }
    }
}

impl From<ContinuumError> for CliError {
    fn from(e: ContinuumError) -> Self {
        let m = e.to_string();
        match e {
            ContinuumError::BadParams(_) => CliError::Usage(m),
            ContinuumError::GridTooLarge { .. } => CliError::Infeasible(m),
            ContinuumError::NotAnExcursion { .. } => CliError::Invariant(m),
        }
    }
}

impl From<ScalingError> for CliError {
    fn from(e: ScalingError) -> Self {
        let m = e.to_string();
        match e {
            ScalingError::Boltzmann(b) => b.into(),
            ScalingError::Continuum(c) => c.into(),
            ScalingError::InfeasibleSize { .. } => CliError::Infeasible(m),
            ScalingError::InsufficientSizes(_) | ScalingError::NeedsBoltzmann => CliError::Usage(m),
            ScalingError::Invariant(_) => CliError::Invariant(m),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
