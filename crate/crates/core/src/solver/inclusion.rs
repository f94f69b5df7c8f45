use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{require_square, require_strong, SolveResult, Strategy};
use crate::error::{Error, Result};
use crate::metric::Dyadic;
use crate::par::{self, Parallelism};
use crate::prefix::Prefix;
use crate::transformer::Transformer;

/// Node budget used when none is given.
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Frontier size at which exhaustive search fans out to worker threads.
const FAN_OUT: usize = 64;

/// `p` is a bounded-depth solution of `f ∈ T(f)`: every prefix of `p` that
/// the transformer determines from a shorter prefix of `p` is admissible.
pub fn check_membership(t: &Transformer, p: &Prefix) -> Result<bool> {
    let delta = t.delay().0;
    let Some(top) = p.len().checked_sub(delta) else {
        return Ok(true);
    };
    for m in 0..=top {
        if !t.apply(&p.truncate(m))?.contains(&p.truncate(m + delta)) {
            return Ok(false);
        }
    }
    Ok(true)
}

struct Search<'a> {
    t: &'a Transformer,
    depth: usize,
    budget: usize,
    nodes: AtomicUsize,
    empty_at: Mutex<Option<Prefix>>,
}

impl Search<'_> {
    fn new(t: &Transformer, depth: usize, budget: usize) -> Search<'_> {
        Search {
            t,
            depth,
            budget,
            nodes: AtomicUsize::new(0),
            empty_at: Mutex::new(None),
        }
    }

    /// One-letter extensions of `p` that stay membership-consistent, in
    /// ascending order.
    fn children(&self, p: &Prefix) -> Result<Vec<Prefix>> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(Error::BudgetExhausted { budget: self.budget });
        }
        let m = p.len();
        let seen = (m + 1).saturating_sub(self.t.delay().0);
        let image = self.t.apply(&p.truncate(seen))?;
        if image.is_empty() {
            let mut slot = self.empty_at.lock().expect("search state poisoned");
            if slot.as_ref().is_none_or(|q| p < q) {
                *slot = Some(p.clone());
            }
            return Ok(Vec::new());
        }
        let kids: BTreeSet<Prefix> = image
            .iter()
            .map(|q| q.truncate(m + 1))
            .filter(|q| p.is_prefix_of(q))
            .collect();
        Ok(kids.into_iter().collect())
    }

    fn first(&self, p: Prefix, rng: &mut Option<ChaCha8Rng>) -> Result<Option<Prefix>> {
        if p.len() == self.depth {
            return Ok(Some(p));
        }
        let mut kids = self.children(&p)?;
        if let Some(rng) = rng.as_mut() {
            kids.shuffle(rng);
        }
        for kid in kids {
            if let Some(found) = self.first(kid, rng)? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }

    fn all(&self, p: Prefix, out: &mut Vec<Prefix>) -> Result<()> {
        if p.len() == self.depth {
            out.push(p);
            return Ok(());
        }
        for kid in self.children(&p)? {
            self.all(kid, out)?;
        }
        Ok(())
    }

    fn all_parallel(&self, root: Prefix, mode: Parallelism) -> Result<Vec<Prefix>> {
        let mut frontier = vec![root];
        let mut done = Vec::new();
        while frontier.len() < FAN_OUT && frontier.iter().any(|p| p.len() < self.depth) {
            let mut next = Vec::new();
            for p in frontier {
                if p.len() == self.depth {
                    done.push(p);
                } else {
                    next.extend(self.children(&p)?);
                }
            }
            frontier = next;
        }
        let parts = par::map_slice(mode, &frontier, |p| {
            let mut out = Vec::new();
            self.all(p.clone(), &mut out).map(|_| out)
        });
        for part in parts {
            done.extend(part?);
        }
        done.sort();
        done.dedup();
        Ok(done)
    }

    fn failure(&self) -> Error {
        match self.empty_at.lock().expect("search state poisoned").take() {
            Some(p) => Error::EmptyImage { prefix: p.to_string() },
            None => Error::NoSolution { depth: self.depth },
        }
    }
}

/// Finds length-`depth` prefixes of solutions of `f ∈ T(f)`.
///
/// `First` and `Random` return one prefix; `Exhaustive` returns all of them.
/// `First` and `Random` also stop after [`DEFAULT_BUDGET`] nodes. When no
/// prefix survives, the error says whether an empty image was met.
pub fn solve_inclusion(t: &Transformer, depth: usize, strategy: Strategy, mode: Parallelism) -> Result<SolveResult> {
    let budget = match strategy {
        Strategy::Exhaustive { budget } => budget,
        _ => DEFAULT_BUDGET,
    };
    solve_inclusion_within(t, depth, strategy, budget, mode)
}

/// [`solve_inclusion`] with an explicit node budget for every strategy; the
/// budget carried by `Exhaustive` is ignored.
pub fn solve_inclusion_within(
    t: &Transformer,
    depth: usize,
    strategy: Strategy,
    budget: usize,
    mode: Parallelism,
) -> Result<SolveResult> {
    require_strong(t.name(), t.delay())?;
    require_square(t.input(), t.output())?;
    let search = Search::new(t, depth, budget);
    let root = Prefix::empty(t.input().clone());
    let prefixes = match strategy {
        Strategy::First => search.first(root, &mut None)?.into_iter().collect(),
        Strategy::Random { seed } => search
            .first(root, &mut Some(ChaCha8Rng::seed_from_u64(seed)))?
            .into_iter()
            .collect(),
        Strategy::Exhaustive { .. } => search.all_parallel(root, mode)?,
    };
    if prefixes.is_empty() {
        return Err(search.failure());
    }
    Ok(SolveResult {
        prefixes,
        depth,
        certificate: Dyadic::AtMost(depth),
        iterations: depth,
        strategy: Some(strategy),
        nodes: search.nodes.load(Ordering::Relaxed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{Coeff, Domain};
    use crate::solver::solve_det;
    use crate::transformer::{compose, cons_a, magic, unit_delay, Combinator, Delay, DetTransformer};

    fn bits(s: &str) -> Prefix {
        let letters: Vec<String> = s.chars().map(String::from).collect();
        Prefix::parse(&Domain::Gf2, &letters).unwrap()
    }

    /// `f ∈ {X·f, 1 + X·f}`
    fn either() -> Transformer {
        let x: Transformer = unit_delay(&Domain::Gf2).unwrap().into();
        let y: Transformer = cons_a(&Domain::Gf2, Coeff::bit(true)).unwrap().into();
        compose(Combinator::Angelic, &x, &y).unwrap()
    }

    #[test]
    fn exhaustive_finds_constant_solutions() {
        let r = solve_inclusion(&either(), 3, Strategy::Exhaustive { budget: 100 }, Parallelism::default()).unwrap();
        assert_eq!(r.prefixes, vec![bits("000"), bits("111")]);
        for p in &r.prefixes {
            assert!(check_membership(&either(), p).unwrap());
        }
    }

    #[test]
    fn first_and_random_return_members() {
        let r = solve_inclusion(&either(), 10, Strategy::First, Parallelism::default()).unwrap();
        assert_eq!(r.prefixes, vec![bits("0000000000")]);
        for seed in 0..4 {
            let r = solve_inclusion(&either(), 10, Strategy::Random { seed }, Parallelism::default()).unwrap();
            assert!(check_membership(&either(), &r.prefixes[0]).unwrap());
        }
    }

    #[test]
    fn membership_examples() {
        let t = DetTransformer::from_stream_map("1+Xf", Domain::Rational, Domain::Rational, Delay(1), |f| {
            let d = Domain::Rational;
            crate::stream::Stream::one(&d).unwrap().add(&crate::stream::Stream::x(&d).unwrap().mul(f).unwrap()).unwrap()
        });
        let fix = solve_det(&t, 6).unwrap().prefixes.remove(0);
        assert!(check_membership(&t.clone().into(), &fix).unwrap());
        let shift: Transformer = unit_delay(&Domain::Gf2).unwrap().into();
        assert!(!check_membership(&shift, &bits("111")).unwrap());
        let d2 = compose(Combinator::Seq, &shift, &shift).unwrap();
        assert!(check_membership(&d2, &bits("1")).unwrap());
    }

    #[test]
    fn empty_images_are_reported() {
        let m: Transformer = magic(&Domain::Gf2, &Domain::Gf2, Delay(1)).into();
        let err = solve_inclusion(&m, 4, Strategy::First, Parallelism::default()).unwrap_err();
        assert!(matches!(err, Error::EmptyImage { .. }));
    }

    #[test]
    fn budget_applies_to_depth_first_search() {
        let err = solve_inclusion_within(&either(), 12, Strategy::First, 5, Parallelism::default()).unwrap_err();
        assert_eq!(err, Error::BudgetExhausted { budget: 5 });
    }

    #[test]
    fn budget_is_enforced() {
        let err = solve_inclusion(&either(), 12, Strategy::Exhaustive { budget: 5 }, Parallelism::default()).unwrap_err();
        assert_eq!(err, Error::BudgetExhausted { budget: 5 });
    }

    #[test]
    fn exhaustive_is_mode_independent() {
        let a = solve_inclusion(&either(), 9, Strategy::Exhaustive { budget: 1000 }, Parallelism::Sequential).unwrap();
        let b = solve_inclusion(&either(), 9, Strategy::Exhaustive { budget: 1000 }, Parallelism::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
