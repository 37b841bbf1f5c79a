use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use twocoin::Register;

#[derive(Parser, Debug)]
#[command(name = "twocoin", version, about = "Two-coin quantum walk state transfer toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// A subcommand with its arguments. This is also the config echoed in every
/// report, so a report's `config` can be run again as is.
#[derive(Subcommand, Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Command {
    /// Run a transfer protocol and report the final distributions.
    Transfer(TransferArgs),
    /// Sample the final-state marginals and compare them with theory.
    Sample(SampleArgs),
    /// Reconstruct the transferred coin state, from samples or a fixture.
    Tomography(TomographyArgs),
    /// Compile a protocol to a circuit, optionally route it, export QASM.
    Compile(CompileArgs),
    /// Enumerate {I, X} coin schedules that transfer on a cycle.
    Search(SearchArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Transfer(_) => "transfer",
            Command::Sample(_) => "sample",
            Command::Tomography(_) => "tomography",
            Command::Compile(_) => "compile",
            Command::Search(_) => "search",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Transfer(a) => &a.common,
            Command::Sample(a) => &a.common,
            Command::Tomography(a) => &a.common,
            Command::Compile(a) => &a.common,
            Command::Search(a) => &a.common,
        }
    }
}

#[derive(ValueEnum, Serialize, Deserialize, Clone, Copy, Debug, Default, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, Default, PartialEq)]
pub struct Common {
    /// RNG seed; drawn at random and echoed when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Serialize, Deserialize, Clone, Copy, Debug, Default, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Graph {
    #[default]
    Cycle,
    Complete,
}

#[derive(ValueEnum, Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// 0 → 5 on the 8-cycle in seven steps.
    Cycle8,
}

/// Which schedule to run.
#[derive(Args, Serialize, Deserialize, Clone, Debug, Default, PartialEq)]
pub struct ProtocolArgs {
    #[arg(long, value_enum, default_value_t = Graph::Cycle)]
    pub graph: Graph,
    /// Named cycle schedule; the default when no --l/--flips is given.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Cycle length for a custom cycle schedule.
    #[arg(long)]
    pub l: Option<usize>,
    /// Number of vertices of the complete graph.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub source: Option<usize>,
    #[arg(long)]
    pub target: Option<usize>,
    /// Custom cycle coins as a 0/1 string, step 1 first (1 = X, 0 = I).
    #[arg(long)]
    pub flips: Option<String>,
    /// Append an X recovery on coin 1 to a custom cycle schedule.
    #[arg(long)]
    pub recover_x: bool,
    /// Drop identity steps where the graph allows it.
    #[arg(long)]
    pub simplify: bool,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct TransferArgs {
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    /// bell, ghz, w, u3:θ,φ,λ or a list of complex amplitudes like "0.6,0.8i".
    #[arg(long, allow_hyphen_values = true)]
    pub payload: Option<String>,
    /// Also sample the final marginals with this many shots.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub shots: Option<u64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(ValueEnum, Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum RegisterArg {
    Position,
    Coin1,
    Coin2,
}

impl From<RegisterArg> for Register {
    fn from(r: RegisterArg) -> Register {
        match r {
            RegisterArg::Position => Register::Position,
            RegisterArg::Coin1 => Register::Coin1,
            RegisterArg::Coin2 => Register::Coin2,
        }
    }
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct SampleArgs {
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub payload: Option<String>,
    #[arg(long, default_value_t = 8192, value_parser = clap::value_parser!(u64).range(1..))]
    pub shots: u64,
    /// Registers to sample (repeatable); position and coin1 by default.
    #[arg(long = "register", value_enum)]
    pub registers: Vec<RegisterArg>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct TomographyArgs {
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    /// Single-qubit payload; also the target state.
    #[arg(long, allow_hyphen_values = true)]
    pub payload: Option<String>,
    /// Use Born probabilities instead of sampling.
    #[arg(long)]
    pub exact: bool,
    #[arg(long, default_value_t = 8192, value_parser = clap::value_parser!(u64).range(1..))]
    pub shots: u64,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub runs: u64,
    /// Measured frequencies in CSV form (repeatable; files are merged).
    #[arg(long)]
    pub fixture: Vec<PathBuf>,
    /// Round the target density matrix to this many decimals before the
    /// fidelity; 4 by default with --fixture.
    #[arg(long)]
    pub target_decimals: Option<u32>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct CompileArgs {
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    /// line:N, biline:N, star:N or a JSON file {"qubits": N, "edges": [[c, t], ...]}.
    #[arg(long)]
    pub coupling: Option<String>,
    /// Write the final circuit as OpenQASM 2.0 here.
    #[arg(long)]
    pub qasm: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 8)]
    pub l: usize,
    #[arg(long, default_value_t = 0)]
    pub source: usize,
    #[arg(long)]
    pub target: usize,
    #[arg(long, default_value_t = 10)]
    pub max_steps: usize,
    #[command(flatten)]
    pub common: Common,
}
