//! Fixpoints of causal transformers.
//!
//! For a strongly causal deterministic transformer the unique fixpoint is
//! computed exactly, `δ` coefficients per application. Inclusions `f ∈ T(f)`
//! are solved by searching the tree of membership-consistent prefixes.
//! Weakly causal transformers are never solved, only diagnosed.

mod det;
mod diagnose;
mod inclusion;
mod sets;

use std::fmt;

pub use det::{fixpoint_stream, loop_transformer, picard_trace, solve_det, PicardStep};
pub use diagnose::{diagnose_nonexpansive, Diagnosis};
pub use inclusion::{check_membership, solve_inclusion, solve_inclusion_within, DEFAULT_BUDGET};
pub use sets::{fix_sp, fix_wp, induction_check, InductionVerdict};

use crate::error::{Error, Result};
use crate::metric::Dyadic;
use crate::prefix::Prefix;
use crate::transformer::Delay;

/// How to choose among the branches of a nondeterministic transformer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Depth-first, smallest branch first.
    First,
    /// Depth-first in an order shuffled by the seed.
    Random { seed: u64 },
    /// Every solution prefix, visiting at most `budget` tree nodes.
    Exhaustive { budget: usize },
}

impl Strategy {
    pub fn seed(self) -> Option<u64> {
        match self {
            Strategy::Random { seed } => Some(seed),
            _ => None,
        }
    }

    pub fn kind(self) -> &'static str {
        match self {
            Strategy::First => "first",
            Strategy::Random { .. } => "random",
            Strategy::Exhaustive { .. } => "exhaustive",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::First => f.write_str("first"),
            Strategy::Random { seed } => write!(f, "random(seed={seed})"),
            Strategy::Exhaustive { budget } => write!(f, "exhaustive(budget={budget})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    /// Solution prefixes of length `depth`, sorted.
    pub prefixes: Vec<Prefix>,
    pub depth: usize,
    /// Bound on the residual `d(f, T(f))` of every returned prefix.
    pub certificate: Dyadic,
    /// Word-function applications along one solution path.
    pub iterations: usize,
    /// `None` for deterministic solving.
    pub strategy: Option<Strategy>,
    /// Nodes of the branch tree that were expanded.
    pub nodes: usize,
}

pub(crate) fn require_strong(name: &str, delay: Delay) -> Result<()> {
    if delay.is_strong() {
        Ok(())
    } else {
        Err(Error::NotStronglyCausal {
            name: name.to_string(),
            delay: delay.0,
        })
    }
}

pub(crate) fn require_square(input: &crate::coeff::Domain, output: &crate::coeff::Domain) -> Result<()> {
    if input != output {
        if input.arity() != output.arity() {
            return Err(Error::ArityMismatch {
                expected: input.arity(),
                found: output.arity(),
            });
        }
        return Err(Error::mismatch(input, output));
    }
    Ok(())
}
