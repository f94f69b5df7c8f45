use std::collections::VecDeque;

use super::{require_square, require_strong, solve_det};
use crate::error::{Error, Result};
use crate::prefix::{Prefix, PrefixSet};
use crate::settrans::sp;
use crate::transformer::Transformer;

/// The length-`depth` prefixes of the greatest set `F` with `F = sp_T(F)`.
///
/// Iterates `F ↦ sp_T(F)` from `start` (default `{ε}`) `⌈depth/δ⌉` times,
/// truncating to `depth`. The result does not depend on a nonempty start.
pub fn fix_sp(t: &Transformer, depth: usize, start: Option<&PrefixSet>) -> Result<PrefixSet> {
    require_strong(t.name(), t.delay())?;
    require_square(t.input(), t.output())?;
    let mut f = match start {
        Some(s) => s.truncate(depth),
        None => PrefixSet::singleton(Prefix::empty(t.input().clone())),
    };
    for _ in 0..depth.div_ceil(t.delay().0) {
        f = sp(t, &f)?.truncate(depth);
    }
    Ok(f)
}

/// The largest subset `G` of `universe` (truncated to `depth`) such that
/// every member's determined image lies in `G`: the fixpoint of
/// `G ↦ {p ∈ U : T(p↓(depth−δ)) ⊆ G}`, reached by decreasing iteration.
pub fn fix_wp(t: &Transformer, depth: usize, universe: &PrefixSet) -> Result<PrefixSet> {
    require_strong(t.name(), t.delay())?;
    require_square(t.input(), t.output())?;
    if universe.length() < depth {
        return Err(Error::LengthMismatch {
            expected: depth,
            found: universe.length(),
        });
    }
    let seen = depth.checked_sub(t.delay().0).ok_or(Error::LengthMismatch {
        expected: t.delay().0,
        found: depth,
    })?;
    let u = universe.truncate(depth);
    let mut g = u.clone();
    loop {
        let mut next = PrefixSet::empty(u.domain().clone(), depth);
        for p in u.iter() {
            if t.apply(&p.truncate(seen))?.is_subset(&g)? {
                next.insert(p.clone())?;
            }
        }
        if next == g {
            return Ok(g);
        }
        g = next;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InductionVerdict {
    /// The step holds on every checked prefix and the computed fixpoint
    /// prefixes satisfy the predicate.
    Holds {
        depth: usize,
        checked: usize,
        fixpoints: Vec<Prefix>,
    },
    /// `prefix` satisfies the predicate but its output `image` does not.
    StepViolation { prefix: Prefix, image: Prefix },
    /// The predicate rejects the empty word, so it describes no stream.
    EmptyPredicate,
}

/// Checks the induction step of fixpoint induction for a prefix-closed
/// predicate: every output of a prefix satisfying `pred` satisfies `pred`.
/// Inputs are all predicate-satisfying words up to `depth − δ` built from
/// the domain's letter pool, visited shortest first. On success the
/// fixpoint prefixes at `depth` are computed and checked too.
pub fn induction_check<P>(t: &Transformer, pred: P, depth: usize, budget: usize) -> Result<InductionVerdict>
where
    P: Fn(&Prefix) -> bool,
{
    require_strong(t.name(), t.delay())?;
    require_square(t.input(), t.output())?;
    let root = Prefix::empty(t.input().clone());
    if !pred(&root) {
        return Ok(InductionVerdict::EmptyPredicate);
    }
    let limit = depth.saturating_sub(t.delay().0);
    let pool = t.input().letter_pool();
    let mut queue = VecDeque::from([root]);
    let mut checked = 0usize;
    while let Some(p) = queue.pop_front() {
        checked += 1;
        if checked > budget {
            return Err(Error::BudgetExhausted { budget });
        }
        for image in t.apply(&p)?.iter() {
            if !pred(image) {
                return Ok(InductionVerdict::StepViolation {
                    prefix: p,
                    image: image.clone(),
                });
            }
        }
        if p.len() < limit {
            for c in &pool {
                let q = p.extended(c.clone())?;
                if pred(&q) {
                    queue.push_back(q);
                }
            }
        }
    }
    let fixpoints = match t {
        Transformer::Det(d) => solve_det(d, depth)?.prefixes,
        Transformer::NDet(_) => fix_sp(t, depth, None)?.into_members(),
    };
    debug_assert!(fixpoints.iter().all(&pred), "induction step held but a fixpoint prefix fails");
    Ok(InductionVerdict::Holds {
        depth,
        checked,
        fixpoints,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{Coeff, Domain};
    use crate::stream::Stream;
    use crate::transformer::{abort, compose, cons_a, magic, unit_delay, Combinator, Delay, DetTransformer};

    fn either() -> Transformer {
        let x: Transformer = unit_delay(&Domain::Gf2).unwrap().into();
        let y: Transformer = cons_a(&Domain::Gf2, Coeff::bit(true)).unwrap().into();
        compose(Combinator::Angelic, &x, &y).unwrap()
    }

    fn geometric() -> Transformer {
        DetTransformer::from_stream_map("1+Xf", Domain::Rational, Domain::Rational, Delay(1), |f| {
            let d = Domain::Rational;
            Stream::one(&d).unwrap().add(&Stream::x(&d).unwrap().mul(f).unwrap()).unwrap()
        })
        .into()
    }

    #[test]
    fn fix_sp_examples() {
        let g = geometric();
        let fixed = fix_sp(&g, 5, None).unwrap();
        assert_eq!(fixed.into_members(), solve_det(g.as_det().unwrap(), 5).unwrap().prefixes);
        assert_eq!(fix_sp(&either(), 3, None).unwrap().len(), 8);
        let m: Transformer = magic(&Domain::Gf2, &Domain::Gf2, Delay(1)).into();
        assert!(fix_sp(&m, 3, None).unwrap().is_empty());
    }

    #[test]
    fn fix_sp_ignores_start() {
        let start = PrefixSet::full(&Domain::Gf2, 2).unwrap();
        let d1: Transformer = cons_a(&Domain::Gf2, Coeff::bit(true)).unwrap().into();
        assert_eq!(fix_sp(&d1, 6, Some(&start)).unwrap(), fix_sp(&d1, 6, None).unwrap());
    }

    #[test]
    fn fix_wp_examples() {
        let d1: Transformer = unit_delay(&Domain::Gf2).unwrap().into();
        let full = PrefixSet::full(&Domain::Gf2, 4).unwrap();
        assert_eq!(fix_wp(&d1, 4, &full).unwrap(), full);
        let none = PrefixSet::empty(Domain::Gf2, 4);
        assert!(fix_wp(&d1, 4, &none).unwrap().is_empty());
        let zeros = PrefixSet::singleton(Prefix::parse(&Domain::Gf2, &["0", "0", "0", "0"]).unwrap());
        assert_eq!(fix_wp(&d1, 4, &zeros).unwrap(), zeros);
        let a: Transformer = abort(&Domain::Gf2, &Domain::Gf2, Delay(1)).unwrap().into();
        assert!(fix_wp(&a, 4, &zeros).unwrap().is_empty());
    }

    #[test]
    fn induction_examples() {
        let all = |c: i64| move |p: &Prefix| p.word().iter().all(|x| *x == Coeff::int(c));
        match induction_check(&geometric(), all(1), 6, 10_000).unwrap() {
            InductionVerdict::Holds { fixpoints, .. } => assert!(fixpoints.iter().all(all(1))),
            v => panic!("{v:?}"),
        }
        let shift: Transformer = unit_delay(&Domain::Rational).unwrap().into();
        let head_zero = |p: &Prefix| p.letter(0).is_none_or(Coeff::is_zero);
        assert!(matches!(induction_check(&shift, head_zero, 6, 100_000).unwrap(), InductionVerdict::Holds { .. }));
        match induction_check(&geometric(), all(0), 6, 10_000).unwrap() {
            InductionVerdict::StepViolation { prefix, .. } => assert!(prefix.is_empty()),
            v => panic!("{v:?}"),
        }
    }
}
