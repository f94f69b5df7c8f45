//! Sampling falsifiers for delay claims, contraction, consistency and
//! refinement. A clean verdict means no counterexample was found, not that
//! the property holds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Delay, Transformer};
use crate::coeff::Domain;
use crate::error::Result;
use crate::metric::{hausdorff, word_distance, Dyadic};
use crate::par::{self, Parallelism};
use crate::prefix::{Prefix, PrefixSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CausalityVerdict {
    NoViolationFound {
        pairs: usize,
    },
    /// Inputs `f`, `g` agree on their first `k` letters but the output sets
    /// are `observed` apart, more than the claimed bound allows.
    Counterexample {
        f: Prefix,
        g: Prefix,
        k: usize,
        observed: Dyadic,
    },
}

impl CausalityVerdict {
    pub fn is_clean(&self) -> bool {
        matches!(self, CausalityVerdict::NoViolationFound { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refinement {
    HoldsToDepth(usize),
    /// `witness` is an output of the refining transformer on `input` that
    /// the refined one does not allow.
    Counterexample { input: Prefix, witness: Prefix },
}

pub(crate) fn rng_for(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

pub(crate) fn random_word<R: Rng>(domain: &Domain, len: usize, rng: &mut R) -> Prefix {
    Prefix::new_unchecked(domain.clone(), (0..len).map(|_| domain.sample(rng)).collect())
}

/// Sample `i` of a pair stream: two words of length `depth` that agree on
/// exactly their first `k` letters, with `k` cycling through `0..depth`.
pub(crate) fn sample_pair(domain: &Domain, depth: usize, seed: u64, i: usize) -> Option<(Prefix, Prefix, usize)> {
    if depth == 0 {
        return None;
    }
    let mut rng = rng_for(seed, i);
    let f = random_word(domain, depth, &mut rng);
    let k = i % depth;
    let mut word = f.word()[..k].to_vec();
    word.push(domain.other_letter(&f.word()[k], &mut rng)?);
    word.extend((k + 1..depth).map(|_| domain.sample(&mut rng)));
    Some((f, Prefix::new_unchecked(domain.clone(), word), k))
}

/// Tests one pair against the contraction bound `H(T(f), T(g)) ≤ 2^-claimed·d(f, g)`.
/// Returns the observed output distance when it certainly exceeds the bound.
pub fn contraction_violation(t: &Transformer, claimed: Delay, f: &Prefix, g: &Prefix) -> Result<Option<Dyadic>> {
    let d_in = word_distance(f, g);
    let Dyadic::Exact(k) = d_in else {
        return Ok(None);
    };
    let n = f.len().min(g.len());
    let a = t.apply(&f.truncate(n))?;
    let b = t.apply(&g.truncate(n))?;
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return Ok(None),
        (true, false) | (false, true) => return Ok(Some(Dyadic::ONE)),
        _ => {}
    }
    let observed = hausdorff(&a, &b)?;
    let bound = Dyadic::Exact(k + claimed.0);
    Ok((observed.is_exact() && observed > bound).then_some(observed))
}

/// Searches `samples` random input pairs of length `depth` for a violation
/// of the claimed delay. Deterministic for a fixed seed in either mode; the
/// reported counterexample is the one with the smallest sample index.
pub fn check_causality(
    t: &Transformer,
    claimed: Delay,
    depth: usize,
    samples: usize,
    seed: u64,
    mode: Parallelism,
) -> Result<CausalityVerdict> {
    let found = par::find_first(mode, samples, |i| {
        let (f, g, k) = sample_pair(t.input(), depth, seed, i)?;
        match contraction_violation(t, claimed, &f, &g) {
            Ok(Some(observed)) => Some(Ok(CausalityVerdict::Counterexample { f, g, k, observed })),
            Ok(None) => None,
            Err(e) => Some(Err(e)),
        }
    });
    match found {
        Some((_, verdict)) => verdict,
        None => Ok(CausalityVerdict::NoViolationFound { pairs: samples }),
    }
}

/// Falsifier for strong contraction: every pair of outputs of inputs `f`, `g`
/// must be within `2^-claimed·d(f, g)`. In particular a single input may
/// never have two different outputs.
pub fn check_strong_contraction(
    t: &Transformer,
    claimed: Delay,
    depth: usize,
    samples: usize,
    seed: u64,
    mode: Parallelism,
) -> Result<CausalityVerdict> {
    let found = par::find_first(mode, samples, |i| {
        let (f, g, k) = if i % 2 == 0 {
            let mut rng = rng_for(seed ^ 0x5eed, i);
            let f = random_word(t.input(), depth, &mut rng);
            (f.clone(), f, depth)
        } else {
            sample_pair(t.input(), depth, seed, i)?
        };
        let a = t.apply(&f);
        let b = t.apply(&g);
        let (a, b) = match (a, b) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return Some(Err(e)),
        };
        let bound = k + claimed.0;
        for u in a.iter() {
            for v in b.iter() {
                if let Dyadic::Exact(j) = word_distance(u, v) {
                    if f == g || j < bound {
                        return Some(Ok(CausalityVerdict::Counterexample {
                            f,
                            g,
                            k,
                            observed: Dyadic::Exact(j),
                        }));
                    }
                }
            }
        }
        None
    });
    match found {
        Some((_, verdict)) => verdict,
        None => Ok(CausalityVerdict::NoViolationFound { pairs: samples }),
    }
}

/// Checks that images are consistent under extension of the input: for
/// random words `p` and one-letter extensions `p′`, the image of `p′`
/// truncated to the image length of `p` equals the image of `p`. Returns
/// the first offending input word.
pub fn check_consistency(t: &Transformer, depth: usize, samples: usize, seed: u64) -> Result<Option<Prefix>> {
    for i in 0..samples {
        let mut rng = rng_for(seed, i);
        let len = rng.gen_range(0..depth.max(1));
        let p = random_word(t.input(), len, &mut rng);
        let longer = p.extended(t.input().sample(&mut rng))?;
        let short = t.apply(&p)?;
        let long = t.apply(&longer)?;
        if long.truncate(short.length()) != short {
            return Ok(Some(longer));
        }
    }
    Ok(None)
}

const ENUMERATION_LIMIT: usize = 1 << 12;
const REFINEMENT_SAMPLES: usize = 2000;

fn test_inputs(domain: &Domain, depth: usize) -> Vec<Prefix> {
    let total = domain.letter_count().and_then(|n| {
        (0..=depth).try_fold(0usize, |acc, len| acc.checked_add(n.checked_pow(len as u32)?))
    });
    match total {
        Some(total) if total <= ENUMERATION_LIMIT => (0..=depth)
            .flat_map(|len| PrefixSet::full(domain, len).expect("finite domain").into_members())
            .collect(),
        _ => (0..REFINEMENT_SAMPLES)
            .map(|i| {
                let mut rng = rng_for(0x7e5f, i);
                let len = rng.gen_range(0..=depth);
                random_word(domain, len, &mut rng)
            })
            .collect(),
    }
}

/// Checks `S ⪯ T`, i.e. `S(p) ⊆ T(p)`, on every input word up to `depth`
/// (finite domains with few words) or on sampled words. Images are compared
/// at the length both transformers determine.
pub fn refines(s: &Transformer, t: &Transformer, depth: usize, mode: Parallelism) -> Result<Refinement> {
    let inputs = test_inputs(s.input(), depth);
    let delay = s.delay().0.min(t.delay().0);
    let found = par::find_first(mode, inputs.len(), |i| {
        let p = &inputs[i];
        let n = p.len() + delay;
        let images = s.apply(p).and_then(|a| Ok((a.truncate(n), t.apply(p)?.truncate(n))));
        match images {
            Err(e) => Some(Err(e)),
            Ok((a, b)) => a.iter().find(|w| !b.contains(w)).map(|w| {
                Ok(Refinement::Counterexample {
                    input: p.clone(),
                    witness: w.clone(),
                })
            }),
        }
    });
    match found {
        Some((_, r)) => r,
        None => Ok(Refinement::HoldsToDepth(depth)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Coeff;
    use crate::transformer::{compose, identity, succ, unit_delay, Combinator};

    fn q_word(v: &[i64]) -> Prefix {
        Prefix::new(Domain::Rational, v.iter().map(|&n| Coeff::int(n)).collect()).unwrap()
    }

    #[test]
    fn unit_delay_is_one_causal() {
        let d1: Transformer = unit_delay(&Domain::Gf2).unwrap().into();
        let v = check_causality(&d1, Delay(1), 16, 500, 7, Parallelism::default()).unwrap();
        assert!(v.is_clean());
    }

    #[test]
    fn succ_is_only_weakly_causal() {
        let s: Transformer = succ(&Domain::Rational).unwrap().into();
        let hit = contraction_violation(&s, Delay(1), &q_word(&[0, 0]), &q_word(&[0, 1])).unwrap();
        assert_eq!(hit, Some(Dyadic::Exact(1)));
        let v = check_causality(&s, Delay(1), 8, 200, 1, Parallelism::Sequential).unwrap();
        assert!(!v.is_clean());
        let v = check_causality(&s, Delay(0), 8, 200, 1, Parallelism::Sequential).unwrap();
        assert!(v.is_clean());
    }

    #[test]
    fn verdicts_do_not_depend_on_mode() {
        let s: Transformer = succ(&Domain::Rational).unwrap().into();
        let a = check_causality(&s, Delay(2), 8, 300, 11, Parallelism::Sequential).unwrap();
        let b = check_causality(&s, Delay(2), 8, 300, 11, Parallelism::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn refinement_examples() {
        let x: Transformer = unit_delay(&Domain::Gf2).unwrap().into();
        let y: Transformer = crate::transformer::cons_a(&Domain::Gf2, Coeff::bit(true)).unwrap().into();
        assert_eq!(refines(&x, &x, 6, Parallelism::default()).unwrap(), Refinement::HoldsToDepth(6));
        let meet = compose(Combinator::Demonic, &x, &y).unwrap();
        assert!(matches!(refines(&meet, &x, 6, Parallelism::default()).unwrap(), Refinement::HoldsToDepth(_)));
        let join = compose(Combinator::Angelic, &x, &y).unwrap();
        match refines(&join, &x, 6, Parallelism::default()).unwrap() {
            Refinement::Counterexample { witness, .. } => assert_eq!(witness.letter(0), Some(&Coeff::bit(true))),
            other => panic!("expected counterexample, got {other:?}"),
        }
    }

    #[test]
    fn deterministic_maps_are_strong_contractions() {
        let d1: Transformer = unit_delay(&Domain::Gf2).unwrap().into();
        assert!(check_strong_contraction(&d1, Delay(1), 12, 300, 3, Parallelism::default()).unwrap().is_clean());
        let id: Transformer = identity(&Domain::Gf2).into();
        let either = compose(Combinator::Angelic, &d1, &id).unwrap();
        assert!(!check_strong_contraction(&either, Delay(0), 12, 300, 3, Parallelism::default())
            .unwrap()
            .is_clean());
    }

    #[test]
    fn builtin_images_are_consistent() {
        let d1: Transformer = unit_delay(&Domain::Gf2).unwrap().into();
        assert_eq!(check_consistency(&d1, 10, 100, 0).unwrap(), None);
        let m: Transformer = crate::transformer::mix().into();
        assert_eq!(check_consistency(&m, 10, 200, 0).unwrap(), None);
    }
}
