//! Exact lazy power-series streams, causal stream transformers and
//! certified fixpoint computation.
//!
//! Streams are infinite coefficient sequences evaluated on demand. A
//! transformer is δ-causal when the first `k` input coefficients fix the
//! first `k + δ` output coefficients; for δ ≥ 1 such a transformer is a
//! contraction in the prefix ultrametric and its fixpoints can be computed
//! prefix by prefix with exact results.

pub mod coeff;
pub mod dsl;
pub mod error;
pub mod io;
pub mod metric;
pub mod par;
pub mod prefix;
pub mod settrans;
pub mod solver;
pub mod stream;
pub mod transformer;

pub use coeff::{Coeff, Domain};
pub use error::{Error, Result};
pub use metric::{Ball, Dyadic};
pub use par::Parallelism;
pub use prefix::{Prefix, PrefixSet};
pub use stream::Stream;
pub use transformer::{Delay, DetTransformer, NDetTransformer, Transformer};
