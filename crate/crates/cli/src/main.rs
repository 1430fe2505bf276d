//! `ecta`: command-line front end for the automaton, SAT and synthesis crates.

mod commands;
mod stats;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
/// An oracle check found a difference.
pub const EXIT_CHECK_FAILED: u8 = 3;
pub const EXIT_SAT: u8 = 10;
pub const EXIT_UNSAT: u8 = 20;

#[derive(Parser, Debug)]
#[command(name = "ecta", version, about = "Equality-constrained tree automata: enumeration, SAT and synthesis")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Give up after this many seconds; partial results are still printed.
    #[arg(long, global = true)]
    pub timeout_secs: Option<f64>,
    /// Print counters as key=value lines on stderr.
    #[arg(long, global = true)]
    pub stats: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Boolean satisfiability.
    #[command(subcommand)]
    Sat(SatCommand),
    /// Type-directed synthesis of applicative programs.
    Synth(SynthArgs),
    /// Enumerate the terms of an automaton.
    Enumerate(EnumerateArgs),
    /// Statically reduce an automaton and print the result.
    Reduce(ReduceArgs),
    /// Print an automaton in Graphviz DOT.
    Dot(DotArgs),
    /// Compare enumeration with bounded denotation.
    OracleCheck(OracleArgs),
}

#[derive(Subcommand, Debug)]
pub enum SatCommand {
    /// Solve a DIMACS CNF file.
    Solve(SatArgs),
}

#[derive(Args, Debug)]
pub struct SatArgs {
    /// DIMACS file, or `-` for stdin.
    pub file: PathBuf,
    /// Print every model, not just the first.
    #[arg(long)]
    pub all: bool,
    #[arg(long, value_enum, default_value_t = EncodingArg::PerLiteral)]
    pub encoding: EncodingArg,
    /// Static reduction rounds before enumerating.
    #[arg(long, default_value_t = 0)]
    pub reduce_rounds: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum EncodingArg {
    PerLiteral,
    FirstTrue,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    /// Component library, one `name :: type` per line. Defaults to the bundled sample.
    #[arg(long)]
    pub library: Option<PathBuf>,
    /// Type of the wanted function, e.g. "a -> [Maybe a] -> a".
    #[arg(long)]
    pub query: String,
    #[arg(long, default_value_t = 8)]
    pub max_size: usize,
    /// Names of the query's inputs, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub arg_names: Option<Vec<String>>,
    /// Also accept programs that ignore some inputs.
    #[arg(long)]
    pub no_relevancy: bool,
    /// Filter unconstrained enumeration instead of enumerating with constraints.
    #[arg(long)]
    pub naive: bool,
    /// Static reduction rounds per size; 0 leaves everything to enumeration.
    #[arg(long, default_value_t = ecta::DEFAULT_MAX_ROUNDS)]
    pub reduce_rounds: usize,
    /// Encode arrow types without the tag child.
    #[arg(long)]
    pub untagged: bool,
    /// Stop after this many programs.
    #[arg(long)]
    pub limit: Option<usize>,
    /// Give up after exploring this many states.
    #[arg(long)]
    pub max_states: Option<u64>,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    /// Automaton in the text format, or `-` for stdin.
    pub file: PathBuf,
    /// Most lines printed.
    #[arg(long, default_value_t = 1000)]
    pub limit: usize,
    /// Print concrete terms.
    #[arg(long, conflicts_with = "compact")]
    pub expand: bool,
    /// Print enumeration states (the default).
    #[arg(long)]
    pub compact: bool,
    #[arg(long, value_enum, default_value_t = ScheduleArg::DfsLr)]
    pub schedule: ScheduleArg,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ScheduleArg {
    /// First suspendable position, left to right.
    DfsLr,
    /// Last suspendable position.
    Rtl,
    /// Position with the fewest alternatives.
    Fewest,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = ecta::DEFAULT_MAX_ROUNDS)]
    pub rounds: usize,
    #[arg(long, value_enum, default_value_t = AlgoArg::Optimized)]
    pub algo: AlgoArg,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum AlgoArg {
    Basic,
    Optimized,
}

#[derive(Args, Debug)]
pub struct DotArgs {
    pub file: PathBuf,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    /// Automaton to check. Without it, random automata are checked.
    #[arg(required_unless_present = "random")]
    pub file: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    /// Check this many random acyclic automata drawn from `--seed`.
    #[arg(long, conflicts_with = "file")]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 7)]
    pub max_nodes: usize,
    #[arg(long, default_value_t = 3)]
    pub max_pecs: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
