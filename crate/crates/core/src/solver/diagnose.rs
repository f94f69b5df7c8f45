use std::collections::BTreeSet;

use crate::coeff::Coeff;
use crate::error::Result;
use crate::metric::{word_distance, Ball, Dyadic};
use crate::prefix::Prefix;
use crate::transformer::causality::{random_word, rng_for};
use crate::transformer::Transformer;

/// Node budget of the fixpoint-prefix search.
const SEARCH_BUDGET: usize = 200_000;
/// Number of candidate centers tried per ball radius.
const CENTERS: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnosis {
    /// A prefix of length `depth` consistent with `f ∈ T(f)` at every length.
    FixpointPrefixFound { prefix: Prefix, depth: usize },
    /// No consistent prefix longer than `deepest` exists, and every sampled
    /// `u` in `ball` has `d(u, T(u)) = radius`, the radius of the ball.
    InvariantDistanceWitness {
        deepest: usize,
        radius: Dyadic,
        ball: Ball,
        samples: usize,
    },
    Inconclusive { deepest: usize },
}

struct Probe<'a> {
    t: &'a Transformer,
    depth: usize,
    nodes: usize,
    deepest: usize,
}

impl Probe<'_> {
    fn consistent(&self, q: &Prefix) -> Result<bool> {
        let Some(seen) = q.len().checked_sub(self.t.delay().0) else {
            return Ok(true);
        };
        Ok(self.t.apply(&q.truncate(seen))?.contains(q))
    }

    fn candidates(&self, p: &Prefix) -> Result<Vec<Coeff>> {
        let domain = self.t.input();
        if let Some(all) = domain.letters() {
            return Ok(all);
        }
        let pool = domain.letter_pool();
        let mut letters: BTreeSet<Coeff> = pool.iter().cloned().collect();
        let seen = (p.len() + 1).saturating_sub(self.t.delay().0);
        for c in &pool {
            let q = p.extended(c.clone())?;
            for w in self.t.apply(&q.truncate(seen))?.iter() {
                if let Some(last) = w.letter(p.len()) {
                    letters.insert(last.clone());
                }
            }
        }
        Ok(letters.into_iter().collect())
    }

    /// Depth-first search for a consistent prefix of full length. `Ok(None)`
    /// from a completed search means none exists; the budget yields `Err`.
    fn search(&mut self, p: Prefix) -> Result<Option<Option<Prefix>>> {
        self.deepest = self.deepest.max(p.len());
        if p.len() == self.depth {
            return Ok(Some(Some(p)));
        }
        self.nodes += 1;
        if self.nodes > SEARCH_BUDGET {
            return Ok(None);
        }
        for c in self.candidates(&p)? {
            let q = p.extended(c)?;
            if self.consistent(&q)? {
                match self.search(q)? {
                    Some(None) => {}
                    found => return Ok(found),
                }
            }
        }
        Ok(Some(None))
    }
}

fn distance_to_image(t: &Transformer, u: &Prefix) -> Result<Option<Dyadic>> {
    let n = u.len();
    let image = t.apply(u)?.truncate(n);
    Ok(image.iter().map(|v| word_distance(u, v)).min())
}

/// Semidecision between the two outcomes for a causal transformer: either a
/// fixpoint exists, or some ball of radius `r > 0` has `d(u, T(u)) = r`
/// throughout.
///
/// First searches for a prefix of length `depth` that satisfies membership
/// at every length. If the search space is exhausted without one, balls
/// around sampled prefixes are tested, widest first, for a constant
/// distance between inputs and images equal to the radius.
pub fn diagnose_nonexpansive(t: &Transformer, depth: usize, samples: usize, seed: u64) -> Result<Diagnosis> {
    let mut probe = Probe {
        t,
        depth,
        nodes: 0,
        deepest: 0,
    };
    let root = Prefix::empty(t.input().clone());
    let outcome = probe.search(root.clone())?;
    let deepest = probe.deepest;
    match outcome {
        Some(Some(prefix)) => return Ok(Diagnosis::FixpointPrefixFound { prefix, depth }),
        None => return Ok(Diagnosis::Inconclusive { deepest }),
        Some(None) => {}
    }

    let domain = t.input();
    let base: Vec<Prefix> = (0..CENTERS)
        .map(|i| random_word(domain, depth, &mut rng_for(seed, i)))
        .collect();
    for radius in 0..depth {
        let centers: BTreeSet<Prefix> = base.iter().map(|w| w.truncate(radius)).collect();
        'centers: for center in centers {
            for i in 0..samples {
                let mut rng = rng_for(seed ^ 0xba11, i);
                let tail = random_word(domain, depth - radius, &mut rng);
                let mut word = center.word().to_vec();
                word.extend_from_slice(tail.word());
                let u = Prefix::new_unchecked(domain.clone(), word);
                if distance_to_image(t, &u)? != Some(Dyadic::Exact(radius)) {
                    continue 'centers;
                }
            }
            return Ok(Diagnosis::InvariantDistanceWitness {
                deepest,
                radius: Dyadic::Exact(radius),
                ball: Ball::new(center),
                samples,
            });
        }
    }
    Ok(Diagnosis::Inconclusive { deepest })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Domain;
    use crate::transformer::{identity, succ};

    #[test]
    fn succ_has_invariant_distance_one() {
        let s: Transformer = succ(&Domain::Rational).unwrap().into();
        match diagnose_nonexpansive(&s, 16, 50, 0).unwrap() {
            Diagnosis::InvariantDistanceWitness { radius, ball, deepest, .. } => {
                assert_eq!(radius, Dyadic::ONE);
                assert!(ball.center().is_empty());
                assert_eq!(deepest, 0);
            }
            d => panic!("{d:?}"),
        }
    }

    #[test]
    fn identity_has_fixpoints() {
        let id: Transformer = identity(&Domain::Gf2).into();
        assert!(matches!(
            diagnose_nonexpansive(&id, 32, 10, 0).unwrap(),
            Diagnosis::FixpointPrefixFound { depth: 32, .. }
        ));
    }
}
