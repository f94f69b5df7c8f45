use super::{require_square, require_strong, SolveResult};
use crate::error::Result;
use crate::metric::{word_distance, Dyadic};
use crate::prefix::Prefix;
use crate::stream::Stream;
use crate::transformer::DetTransformer;

/// The first `depth` coefficients of the unique fixpoint, obtained by
/// applying the word function to its own output starting from the empty
/// word. Each application fixes `δ` further coefficients.
pub fn solve_det(t: &DetTransformer, depth: usize) -> Result<SolveResult> {
    require_strong(t.name(), t.delay())?;
    require_square(t.input(), t.output())?;
    let mut p = Prefix::empty(t.input().clone());
    let mut iterations = 0;
    while p.len() < depth {
        p = t.apply(&p)?;
        iterations += 1;
    }
    Ok(SolveResult {
        prefixes: vec![p.truncate(depth)],
        depth,
        certificate: Dyadic::AtMost(depth),
        iterations,
        strategy: None,
        nodes: iterations,
    })
}

/// The fixpoint as a lazy stream, built by feeding the transformer its own
/// output.
pub fn fixpoint_stream(t: &DetTransformer) -> Result<Stream> {
    require_strong(t.name(), t.delay())?;
    require_square(t.input(), t.output())?;
    let t = t.clone();
    Stream::feedback(t.input().clone(), move |f| t.lift_stream(f))
}

/// `LOOP T`: the constant transformer returning the fixpoint of `t`.
pub fn loop_transformer(t: &DetTransformer) -> Result<DetTransformer> {
    let fix = fixpoint_stream(t)?;
    let delay = t.delay();
    Ok(DetTransformer::new(
        format!("loop({})", t.name()),
        t.input().clone(),
        t.output().clone(),
        delay,
        move |p| fix.prefix(p.len() + delay.0),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicardStep {
    pub iteration: usize,
    /// `f_k` truncated to the inspection depth.
    pub prefix: Prefix,
    /// Certified `d(f_k, f*)` at the inspection depth.
    pub distance: Dyadic,
    /// The a-priori bound `2^-kδ`.
    pub bound: Dyadic,
}

impl PicardStep {
    /// Whether the distance respects the bound, or `None` when the
    /// inspection depth is too shallow to tell.
    pub fn within_bound(&self) -> Option<bool> {
        match self.distance {
            Dyadic::AtMost(n) if n < self.bound.exponent() => None,
            d => Some(d <= self.bound),
        }
    }
}

/// Iterates `f_{k+1} = T(f_k)` from `f0` for `k_max` steps, recording each
/// iterate's distance to the exact fixpoint.
pub fn picard_trace(t: &DetTransformer, f0: &Stream, k_max: usize, depth: usize) -> Result<Vec<PicardStep>> {
    let fix = solve_det(t, depth)?.prefixes.remove(0);
    let delta = t.delay().0;
    let mut f = f0.prefix(depth);
    let mut steps = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        steps.push(PicardStep {
            iteration: k,
            distance: word_distance(&f, &fix),
            bound: Dyadic::Exact(k * delta),
            prefix: f.clone(),
        });
        if k < k_max {
            f = t.apply(&f)?.truncate(depth);
        }
    }
    Ok(steps)
}
