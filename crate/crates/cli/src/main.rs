//! `causal-streams`: analyse and solve stream equation systems from `.cse`
//! files.

mod report;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Seed used when `--seed` is absent.
pub const DEFAULT_SEED: u64 = 1;
/// Largest full universe `wp` enumerates without an explicit `--universe`.
pub const DEFAULT_MAX_UNIVERSE: usize = 1 << 20;
pub const BUDGET_ENV: &str = "CAUSAL_STREAMS_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "causal-streams", version, about = "Causality analysis and exact fixpoints of stream equations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Report the dependency graph, cycle delays and causality verdict.
    Check {
        file: PathBuf,
        /// Run the bounded semantic check to this depth when the static
        /// analysis finds zero-delay cycles.
        #[arg(long, value_parser = positive)]
        semantic_depth: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Compute solution prefixes with a residual certificate.
    Solve {
        file: PathBuf,
        #[arg(long, value_parser = positive)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::First)]
        strategy: StrategyArg,
        /// Node budget for the branch search; defaults to $CAUSAL_STREAMS_BUDGET.
        #[arg(long)]
        budget: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Certified distance between two streams of a solved system, or input
    /// specifications such as `ramp(1,1)`.
    Dist {
        file: PathBuf,
        a: String,
        b: String,
        #[arg(long, value_parser = positive)]
        depth: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Greatest sp-fixpoint approximation of the solutions.
    Sp {
        file: PathBuf,
        #[arg(long, value_parser = positive)]
        depth: usize,
        /// Starting set (JSON); defaults to the empty word.
        #[arg(long, value_name = "SETFILE")]
        init: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Largest wp-closed subset of a universe of prefixes.
    Wp {
        file: PathBuf,
        #[arg(long, value_parser = positive)]
        depth: usize,
        /// Candidate prefixes (JSON); defaults to every word of length DEPTH.
        #[arg(long, value_name = "SETFILE")]
        universe: Option<PathBuf>,
        /// Refuse to enumerate a default universe larger than this.
        #[arg(long, default_value_t = DEFAULT_MAX_UNIVERSE)]
        max_universe: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Check that prefixes satisfy the system at every length.
    Verify {
        file: PathBuf,
        /// Output of `solve --format json`, an array of state prefixes, or a
        /// single prefix.
        #[arg(long, value_name = "PREFIXFILE")]
        solution: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Bind an input stream, overriding the source: `NAME=poly(..)`,
    /// `cycle(..)`, `ramp(a, b)` or `const(a)`.
    #[arg(long = "input", value_name = "NAME=SPEC")]
    pub inputs: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrategyArg {
    First,
    Random,
    Exhaustive,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { run::EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
