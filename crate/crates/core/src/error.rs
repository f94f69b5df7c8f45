use thiserror::Error;

use crate::dsl::Diagnostic;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain mismatch: expected {expected}, found {found}")]
    DomainMismatch { expected: String, found: String },

    #[error("inverse of zero")]
    InvOfZero,

    #[error("operation `{op}` is not supported on {domain}")]
    UnsupportedOp { op: &'static str, domain: String },

    #[error("stream is not invertible: its constant coefficient is zero")]
    NotInvertible,

    #[error("functional composition needs an inner series with zero constant coefficient")]
    InnerConstantTermNonzero,

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("Hausdorff distance is only defined between nonempty sets")]
    EmptySet,

    #[error("`{name}` is not strongly causal (declared delay {delay})")]
    NotStronglyCausal { name: String, delay: usize },

    #[error("empty image encountered at prefix {prefix}")]
    EmptyImage { prefix: String },

    #[error("node budget of {budget} exhausted")]
    BudgetExhausted { budget: usize },

    #[error("no solution prefix of length {depth}")]
    NoSolution { depth: usize },

    #[error("domain {domain} is not enumerable; an explicit universe is required")]
    NonEnumerable { domain: String },

    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),

    #[error("bad parameters for `{name}`: {reason}")]
    BadParams { name: String, reason: String },

    #[error("malformed coefficient `{text}` for domain {domain}")]
    MalformedCoeff { text: String, domain: String },

    #[error("system rejected: {0}")]
    Rejected(String),

    #[error(transparent)]
    Syntax(#[from] Diagnostic),

    #[error("{0}")]
    Format(String),
}

impl Error {
    pub(crate) fn mismatch(expected: impl ToString, found: impl ToString) -> Self {
        Error::DomainMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
