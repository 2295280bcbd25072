//! `bdlab`: samplers, verification suites and scaling diagnostics for random
//! bipartite maps with a boundary and their Brownian disk limits.

mod artifact;
mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use bdlab::boltzmann::{SizeSymbol, WeightSequence};
use bdlab::scaling::{ModelSpec, Model};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "bdlab", version = artifact::VERSION, about = "Random maps with a boundary and Brownian disks")]
struct Cli {
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, env = "BD_LAB_THREADS")]
    threads: Option<usize>,
    /// Read the command from a JSON file, e.g. `{"command": "constants", "weights": "2p:3"}`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
enum Command {
    /// Draw maps or labeled forests.
    Sample(SampleArgs),
    /// Exhaustive bijection checks and randomized distance identities.
    Verify(VerifyArgs),
    /// Solve a weight sequence for its critical constants.
    Constants(ConstantsArgs),
    /// Scaling diagnostics against continuum predictions.
    Scaling(ScalingArgs),
    /// Brownian disk grid approximations.
    Continuum(ContinuumArgs),
}

impl Command {
    fn seed(&self) -> Option<u64> {
        match self {
            Command::Sample(a) => Some(a.seed),
            Command::Verify(a) => Some(a.seed),
            Command::Constants(_) => None,
            Command::Scaling(a) => Some(a.seed),
            Command::Continuum(a) => Some(a.seed),
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ModelName {
    /// Uniform quadrangulations with a boundary, sized by faces.
    Quad,
    /// Boltzmann maps for `--weights`, conditioned on `--size-symbol`.
    Boltzmann,
    /// The labeled forest encoding a uniform quadrangulation.
    Forest,
}

#[derive(clap::Args, Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
struct ModelArgs {
    #[arg(long, value_enum, default_value = "quad")]
    model: ModelName,
    /// `quadrangulation`, `2p:<p>`, `uniform`, `geometric:a=<a>`, `delta:<k>=<q>,...` or JSON.
    #[arg(long, default_value = "quadrangulation")]
    weights: String,
    #[arg(long, default_value = "F")]
    size_symbol: SizeSymbol,
    /// Boundary scale: the half-perimeter is `round(L sigma_S sqrt(n))`.
    #[arg(long = "L", default_value_t = 1.0)]
    #[serde(rename = "L")]
    perimeter: f64,
}

impl Default for ModelArgs {
    fn default() -> Self {
        ModelArgs { model: ModelName::Quad, weights: "quadrangulation".into(), size_symbol: SizeSymbol::F, perimeter: 1.0 }
    }
}

impl ModelArgs {
    fn weights(&self) -> Result<WeightSequence<f64>, CliError> {
        Ok(self.weights.parse::<WeightSequence<f64>>()?)
    }

    fn build(&self) -> Result<Model, CliError> {
        let spec = match self.model {
            ModelName::Quad => ModelSpec::quadrangulations(self.perimeter),
            ModelName::Boltzmann => ModelSpec::boltzmann(self.weights()?, self.size_symbol, self.perimeter),
            ModelName::Forest => return Err(CliError::Usage("--model forest is only valid for `sample`".into())),
        };
        Ok(Model::new(spec)?)
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    /// Compact binary rotation tables, one file per map; needs `--out` as a directory.
    Pmap1,
}

#[derive(Parser, Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
struct SampleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    model: ModelArgs,
    /// Half-perimeter; defaults to the `--L` rule.
    #[arg(long = "l")]
    l: Option<usize>,
    #[arg(long = "n")]
    n: Option<u64>,
    #[arg(long, default_value_t = 1)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Suite {
    Bijections,
    Distances,
    All,
}

#[derive(Parser, Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    /// Largest size for the exhaustive bijection checks (at most 5).
    #[arg(long, default_value_t = 4)]
    max_n: usize,
    /// Random maps for the distance suite.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Size of the random maps.
    #[arg(long = "n", default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Parser, Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
struct ConstantsArgs {
    #[arg(long, default_value = "quadrangulation")]
    weights: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Diagnostic {
    /// Two-point quantiles, diameters and the exponent fit over `--sizes`.
    Run,
    /// KS comparison of two-point laws against `--compare-weights`.
    Universality,
    /// Encoding processes against the continuum, at size `--n`.
    Encoding,
    /// Vertex counts of free Boltzmann maps at the half-perimeters `--perimeters`.
    Perimeter,
    /// Concentration of the vertex counter, `--samples` runs at `m = --n`.
    Concentration,
}

#[derive(Parser, Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
struct ScalingArgs {
    #[command(flatten)]
    #[serde(flatten)]
    model: ModelArgs,
    #[arg(long, value_enum, default_value = "run")]
    diagnostic: Diagnostic,
    #[arg(long, value_delimiter = ',', default_value = "1024,2048,4096,8192")]
    sizes: Vec<u64>,
    #[arg(long = "n", default_value_t = 4096)]
    n: u64,
    #[arg(long, value_delimiter = ',', default_value = "64,128,256")]
    perimeters: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 1024)]
    grid: usize,
    /// Second model for `universality`, always a Boltzmann model.
    #[arg(long, default_value = "2p:3")]
    compare_weights: String,
    #[arg(long, default_value = "F")]
    compare_size_symbol: SizeSymbol,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory; JSON goes to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Parser, Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
struct ContinuumArgs {
    #[arg(long = "L", default_value_t = 1.0)]
    #[serde(rename = "L")]
    perimeter: f64,
    #[arg(long = "A", default_value_t = 1.0)]
    #[serde(rename = "A")]
    area: f64,
    #[arg(long, default_value_t = 2048)]
    grid: usize,
    #[arg(long, default_value_t = 1)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory for per-disk CSV and JSON; a summary goes to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

macro_rules! default_from_flags {
    ($($t:ty => $name:literal),*) => {$(
        impl Default for $t {
            fn default() -> Self {
                <$t>::parse_from([$name])
            }
        }
    )*};
}

default_from_flags!(SampleArgs => "sample", VerifyArgs => "verify", ConstantsArgs => "constants", ScalingArgs => "scaling", ContinuumArgs => "continuum");

fn load_config(path: &PathBuf) -> Result<Command, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), (CliError, Option<u64>)> {
    let command = match (&cli.config, cli.command) {
        (Some(p), None) => load_config(p).map_err(|e| (e, None))?,
        (None, Some(c)) => c,
        (Some(_), Some(_)) => return Err((CliError::Usage("give either a subcommand or --config, not both".into()), None)),
        (None, None) => return Err((CliError::Usage("no subcommand given; see --help".into()), None)),
    };
    let seed = command.seed();
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err((CliError::Usage("--threads must be positive".into()), seed));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| (CliError::Io(e.to_string()), seed))?;
    }
    commands::dispatch(&command).map_err(|e| (e, seed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((e, seed)) => {
            eprintln!("error: {}", e.message());
            if let (CliError::Invariant(_), Some(s)) = (&e, seed) {
                eprintln!("reproduce with --seed {s}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
