//! Strongest postcondition and weakest precondition on finite prefix sets,
//! and Hoare-style contracts built on them.

use crate::error::{Error, Result};
use crate::prefix::{Prefix, PrefixSet};
use crate::transformer::Transformer;

/// The direct image: all outputs of members of `p`.
pub fn sp(t: &Transformer, p: &PrefixSet) -> Result<PrefixSet> {
    if p.domain() != t.input() {
        return Err(Error::mismatch(t.input(), p.domain()));
    }
    let mut out = PrefixSet::empty(t.output().clone(), p.length() + t.delay().0);
    for x in p.iter() {
        for y in t.apply(x)?.iter() {
            out.insert(y.clone())?;
        }
    }
    Ok(out)
}

fn pre_length(t: &Transformer, q: &PrefixSet) -> Result<usize> {
    if q.domain() != t.output() {
        return Err(Error::mismatch(t.output(), q.domain()));
    }
    q.length().checked_sub(t.delay().0).ok_or(Error::LengthMismatch {
        expected: t.delay().0,
        found: q.length(),
    })
}

/// Inputs of length `|q| − δ` all of whose outputs lie in `q`. Needs an
/// enumerable input domain; see [`wp_within`] otherwise.
pub fn wp(t: &Transformer, q: &PrefixSet) -> Result<PrefixSet> {
    let n = pre_length(t, q)?;
    let universe = PrefixSet::full(t.input(), n)?;
    wp_filter(t, q, universe.iter())
}

/// [`wp`] restricted to the candidate inputs in `universe`, which is
/// truncated to the precondition length when longer.
pub fn wp_within(t: &Transformer, q: &PrefixSet, universe: &PrefixSet) -> Result<PrefixSet> {
    let n = pre_length(t, q)?;
    if universe.length() < n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: universe.length(),
        });
    }
    if universe.domain() != t.input() {
        return Err(Error::mismatch(t.input(), universe.domain()));
    }
    wp_filter(t, q, universe.truncate(n).iter())
}

fn wp_filter<'a, I>(t: &Transformer, q: &PrefixSet, candidates: I) -> Result<PrefixSet>
where
    I: Iterator<Item = &'a Prefix>,
{
    let n = q.length() - t.delay().0;
    let mut out = PrefixSet::empty(t.input().clone(), n);
    for p in candidates {
        if t.apply(p)?.is_subset(q)? {
            out.insert(p.clone())?;
        }
    }
    Ok(out)
}

/// `{pre} transformer {post}` with `|post| = |pre| + δ`.
#[derive(Clone, Debug)]
pub struct Contract {
    pub pre: PrefixSet,
    pub transformer: Transformer,
    pub post: PrefixSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HoareVerdict {
    Holds,
    /// `input ∈ pre` has the output `escaped ∉ post`.
    Counterexample { input: Prefix, escaped: Prefix },
}

impl Contract {
    pub fn new(pre: PrefixSet, transformer: Transformer, post: PrefixSet) -> Result<Contract> {
        let expected = pre.length() + transformer.delay().0;
        if post.length() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: post.length(),
            });
        }
        Ok(Contract { pre, transformer, post })
    }
}

pub fn hoare_check(c: &Contract) -> Result<HoareVerdict> {
    for p in c.pre.iter() {
        if let Some(w) = c.transformer.apply(p)?.iter().find(|w| !c.post.contains(w)) {
            return Ok(HoareVerdict::Counterexample {
                input: p.clone(),
                escaped: w.clone(),
            });
        }
    }
    Ok(HoareVerdict::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{Coeff, Domain};
    use crate::transformer::{abort, identity, unit_delay, Delay};

    fn bits(s: &str) -> Prefix {
        let letters: Vec<String> = s.chars().map(String::from).collect();
        Prefix::parse(&Domain::Gf2, &letters).unwrap()
    }

    fn set(len: usize, words: &[&str]) -> PrefixSet {
        PrefixSet::from_prefixes(Domain::Gf2, len, words.iter().map(|w| bits(w))).unwrap()
    }

    fn d1() -> Transformer {
        unit_delay(&Domain::Gf2).unwrap().into()
    }

    #[test]
    fn sp_examples() {
        assert!(sp(&d1(), &set(2, &[])).unwrap().is_empty());
        assert_eq!(sp(&d1(), &set(1, &["1"])).unwrap(), set(2, &["01"]));
        let id: Transformer = identity(&Domain::Gf2).into();
        let p = set(3, &["010", "111"]);
        assert_eq!(sp(&id, &p).unwrap(), p);
    }

    #[test]
    fn wp_examples() {
        assert_eq!(wp(&d1(), &set(2, &["00", "01"])).unwrap(), set(1, &["0", "1"]));
        let full = PrefixSet::full(&Domain::Gf2, 4).unwrap();
        assert_eq!(wp(&d1(), &full).unwrap(), PrefixSet::full(&Domain::Gf2, 3).unwrap());
        let a: Transformer = abort(&Domain::Gf2, &Domain::Gf2, Delay(0)).unwrap().into();
        assert!(wp(&a, &set(2, &["00", "01", "10"])).unwrap().is_empty());
        assert!(matches!(wp(&d1(), &set(0, &[""])), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn wp_over_rationals_needs_a_universe() {
        let t: Transformer = unit_delay(&Domain::Rational).unwrap().into();
        let q = PrefixSet::from_prefixes(Domain::Rational, 2, [Prefix::parse(&Domain::Rational, &["0", "3"]).unwrap()])
            .unwrap();
        assert!(matches!(wp(&t, &q), Err(Error::NonEnumerable { .. })));
        let universe = PrefixSet::from_prefixes(
            Domain::Rational,
            1,
            ["3", "4"].iter().map(|s| Prefix::new(Domain::Rational, vec![Domain::Rational.parse(s).unwrap()]).unwrap()),
        )
        .unwrap();
        let pre = wp_within(&t, &q, &universe).unwrap();
        assert_eq!(pre.len(), 1);
        assert_eq!(pre.iter().next().unwrap().letter(0), Some(&Coeff::int(3)));
    }

    #[test]
    fn hoare_examples() {
        let c = Contract::new(set(1, &[]), d1(), set(2, &["00"])).unwrap();
        assert_eq!(hoare_check(&c).unwrap(), HoareVerdict::Holds);
        let id: Transformer = identity(&Domain::Gf2).into();
        let p = set(2, &["01", "10"]);
        assert_eq!(hoare_check(&Contract::new(p.clone(), id, p).unwrap()).unwrap(), HoareVerdict::Holds);
        let c = Contract::new(set(1, &["1"]), d1(), set(2, &["00"])).unwrap();
        assert_eq!(
            hoare_check(&c).unwrap(),
            HoareVerdict::Counterexample {
                input: bits("1"),
                escaped: bits("01")
            }
        );
    }
}
