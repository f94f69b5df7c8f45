//! Finite words of coefficients and finite sets of equal-length words.

use std::collections::BTreeSet;
use std::fmt;

use crate::coeff::{Coeff, Domain};
use crate::error::{Error, Result};

/// The first `len()` coefficients of some stream.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prefix {
    domain: Domain,
    word: Vec<Coeff>,
}

impl Prefix {
    pub fn new(domain: Domain, word: Vec<Coeff>) -> Result<Prefix> {
        for c in &word {
            domain.check(c)?;
        }
        Ok(Prefix { domain, word })
    }

    pub(crate) fn new_unchecked(domain: Domain, word: Vec<Coeff>) -> Prefix {
        debug_assert!(word.iter().all(|c| domain.contains(c)));
        Prefix { domain, word }
    }

    pub fn empty(domain: Domain) -> Prefix {
        Prefix {
            domain,
            word: Vec::new(),
        }
    }

    /// Parses letters given in their textual form.
    pub fn parse<S: AsRef<str>>(domain: &Domain, letters: &[S]) -> Result<Prefix> {
        let word = letters
            .iter()
            .map(|s| domain.parse(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Prefix::new_unchecked(domain.clone(), word))
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn word(&self) -> &[Coeff] {
        &self.word
    }

    pub fn into_word(self) -> Vec<Coeff> {
        self.word
    }

    pub fn letter(&self, i: usize) -> Option<&Coeff> {
        self.word.get(i)
    }

    /// The first `n` letters (the whole word if it is shorter).
    pub fn truncate(&self, n: usize) -> Prefix {
        Prefix {
            domain: self.domain.clone(),
            word: self.word[..n.min(self.word.len())].to_vec(),
        }
    }

    pub fn push(&mut self, c: Coeff) -> Result<()> {
        self.domain.check(&c)?;
        self.word.push(c);
        Ok(())
    }

    pub fn extended(&self, c: Coeff) -> Result<Prefix> {
        let mut p = self.clone();
        p.push(c)?;
        Ok(p)
    }

    pub fn is_prefix_of(&self, other: &Prefix) -> bool {
        self.domain == other.domain
            && self.word.len() <= other.word.len()
            && self.word[..] == other.word[..self.word.len()]
    }

    /// Length of the longest common prefix.
    pub fn common_prefix_len(&self, other: &Prefix) -> usize {
        self.word
            .iter()
            .zip(other.word.iter())
            .take_while(|(a, b)| a == b)
            .count()
    }

    /// Combines equal-length component words into a word of tuples.
    pub fn zip(parts: &[Prefix]) -> Result<Prefix> {
        match parts {
            [] => Err(Error::ArityMismatch {
                expected: 1,
                found: 0,
            }),
            [single] => Ok(single.clone()),
            _ => {
                let len = parts[0].len();
                if let Some(p) = parts.iter().find(|p| p.len() != len) {
                    return Err(Error::LengthMismatch {
                        expected: len,
                        found: p.len(),
                    });
                }
                let domain = Domain::product(parts.iter().map(|p| p.domain.clone()).collect());
                let word = (0..len)
                    .map(|i| Coeff::tuple(parts.iter().map(|p| p.word[i].clone()).collect()))
                    .collect();
                Ok(Prefix { domain, word })
            }
        }
    }

    /// Splits a word of tuples into its component words.
    pub fn unzip(&self) -> Vec<Prefix> {
        match &self.domain {
            Domain::Product(ds) => ds
                .iter()
                .enumerate()
                .map(|(i, d)| Prefix {
                    domain: d.clone(),
                    word: self
                        .word
                        .iter()
                        .map(|c| match c {
                            Coeff::Tuple(cs) => cs[i].clone(),
                            _ => unreachable!("product domains hold tuple letters"),
                        })
                        .collect(),
                })
                .collect(),
            _ => vec![self.clone()],
        }
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.word.iter().map(|c| self.domain.render(c)).collect()
    }
}

impl fmt::Display for Prefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(","))
    }
}

/// A finite, deduplicated set of prefixes sharing one length.
///
/// The empty set is allowed; it is the image of maps without outcomes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrefixSet {
    domain: Domain,
    length: usize,
    members: BTreeSet<Prefix>,
}

impl PrefixSet {
    pub fn empty(domain: Domain, length: usize) -> PrefixSet {
        PrefixSet {
            domain,
            length,
            members: BTreeSet::new(),
        }
    }

    pub fn singleton(p: Prefix) -> PrefixSet {
        PrefixSet {
            domain: p.domain.clone(),
            length: p.len(),
            members: BTreeSet::from([p]),
        }
    }

    pub fn from_prefixes<I>(domain: Domain, length: usize, members: I) -> Result<PrefixSet>
    where
        I: IntoIterator<Item = Prefix>,
    {
        let mut set = PrefixSet::empty(domain, length);
        for p in members {
            set.insert(p)?;
        }
        Ok(set)
    }

    /// Every word of the given length over a finite domain.
    pub fn full(domain: &Domain, length: usize) -> Result<PrefixSet> {
        let letters = domain.letters().ok_or_else(|| Error::NonEnumerable {
            domain: domain.to_string(),
        })?;
        let mut words: Vec<Vec<Coeff>> = vec![Vec::new()];
        for _ in 0..length {
            words = words
                .into_iter()
                .flat_map(|w| {
                    letters.iter().map(move |l| {
                        let mut w = w.clone();
                        w.push(l.clone());
                        w
                    })
                })
                .collect();
        }
        Ok(PrefixSet {
            domain: domain.clone(),
            length,
            members: words
                .into_iter()
                .map(|w| Prefix::new_unchecked(domain.clone(), w))
                .collect(),
        })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: &Prefix) -> bool {
        self.members.contains(p)
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = &Prefix> {
        self.members.iter()
    }

    pub fn insert(&mut self, p: Prefix) -> Result<bool> {
        if p.domain != self.domain {
            return Err(Error::mismatch(&self.domain, &p.domain));
        }
        if p.len() != self.length {
            return Err(Error::LengthMismatch {
                expected: self.length,
                found: p.len(),
            });
        }
        Ok(self.members.insert(p))
    }

    fn compatible(&self, other: &PrefixSet) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::mismatch(&self.domain, &other.domain));
        }
        if self.length != other.length {
            return Err(Error::LengthMismatch {
                expected: self.length,
                found: other.length,
            });
        }
        Ok(())
    }

    pub fn is_subset(&self, other: &PrefixSet) -> Result<bool> {
        self.compatible(other)?;
        Ok(self.members.is_subset(&other.members))
    }

    pub fn union(&self, other: &PrefixSet) -> Result<PrefixSet> {
        self.compatible(other)?;
        Ok(PrefixSet {
            domain: self.domain.clone(),
            length: self.length,
            members: self.members.union(&other.members).cloned().collect(),
        })
    }

    pub fn intersection(&self, other: &PrefixSet) -> Result<PrefixSet> {
        self.compatible(other)?;
        Ok(PrefixSet {
            domain: self.domain.clone(),
            length: self.length,
            members: self.members.intersection(&other.members).cloned().collect(),
        })
    }

    /// The set of length-`n` prefixes of the members (`n` ≤ length).
    pub fn truncate(&self, n: usize) -> PrefixSet {
        let n = n.min(self.length);
        PrefixSet {
            domain: self.domain.clone(),
            length: n,
            members: self.members.iter().map(|p| p.truncate(n)).collect(),
        }
    }

    /// The members just below and just above `p` in lexicographic order.
    /// One of them shares the longest common prefix with `p`.
    pub(crate) fn neighbors(&self, p: &Prefix) -> (Option<&Prefix>, Option<&Prefix>) {
        use std::ops::Bound::{Excluded, Unbounded};
        let below = self.members.range::<Prefix, _>((Unbounded, Excluded(p))).next_back();
        let above = self.members.range::<Prefix, _>((Excluded(p), Unbounded)).next();
        (below, above)
    }

    pub fn into_members(self) -> Vec<Prefix> {
        self.members.into_iter().collect()
    }
}

impl fmt::Display for PrefixSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}
