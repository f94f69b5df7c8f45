//! Prefix valuation, distances and balls with certified dyadic values.
//!
//! A distance computed at inspection depth `N` is either known exactly
//! (`2^-k` for a first difference at index `k < N`) or only bounded
//! (`≤ 2^-N`, the streams agree on everything inspected).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::prefix::{Prefix, PrefixSet};
use crate::stream::Stream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dyadic {
    /// Exactly `2^-k`.
    Exact(usize),
    /// At most `2^-N`, possibly zero.
    AtMost(usize),
}

impl Dyadic {
    pub const ONE: Dyadic = Dyadic::Exact(0);

    pub fn exponent(self) -> usize {
        match self {
            Dyadic::Exact(k) | Dyadic::AtMost(k) => k,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Dyadic::Exact(_))
    }

    /// Multiplication by `2^-delta`.
    pub fn scale(self, delta: usize) -> Dyadic {
        match self {
            Dyadic::Exact(k) => Dyadic::Exact(k + delta),
            Dyadic::AtMost(k) => Dyadic::AtMost(k + delta),
        }
    }

    /// Whether the value is certified to be at most `2^-k`.
    pub fn at_most(self, k: usize) -> bool {
        self.exponent() >= k
    }

    fn key(self) -> (std::cmp::Reverse<usize>, u8) {
        match self {
            Dyadic::AtMost(k) => (std::cmp::Reverse(k), 0),
            Dyadic::Exact(k) => (std::cmp::Reverse(k), 1),
        }
    }
}

/// Orders values by their certified upper bound: `a ≤ b` means `a` is
/// provably no larger than `b`. Between `≤2^-k` and `2^-k` the bound is
/// the smaller one.
impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dyadic::Exact(k) => write!(f, "2^-{k}"),
            Dyadic::AtMost(k) => write!(f, "<=2^-{k}"),
        }
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Dyadic> {
        let bad = || Error::Format(format!("not a dyadic value: `{s}`"));
        let (exact, rest) = match s.trim().strip_prefix("<=") {
            Some(r) => (false, r),
            None => (true, s.trim()),
        };
        let k: usize = rest.strip_prefix("2^-").ok_or_else(bad)?.parse().map_err(|_| bad())?;
        Ok(if exact { Dyadic::Exact(k) } else { Dyadic::AtMost(k) })
    }
}

/// Index of the first nonzero coefficient among the first `depth`.
pub fn valuation(f: &Stream, depth: usize) -> Dyadic {
    (0..depth)
        .find(|&k| !f.coefficient_at(k).is_zero())
        .map_or(Dyadic::AtMost(depth), Dyadic::Exact)
}

pub fn distance(f: &Stream, g: &Stream, depth: usize) -> Result<Dyadic> {
    if f.domain() != g.domain() {
        return Err(Error::mismatch(f.domain(), g.domain()));
    }
    Ok((0..depth)
        .find(|&k| f.coefficient_at(k) != g.coefficient_at(k))
        .map_or(Dyadic::AtMost(depth), Dyadic::Exact))
}

/// Distance between words, inspected up to the shorter length.
pub fn word_distance(p: &Prefix, q: &Prefix) -> Dyadic {
    let n = p.len().min(q.len());
    let common = p.common_prefix_len(q);
    if common >= n {
        Dyadic::AtMost(n)
    } else {
        Dyadic::Exact(common)
    }
}

/// Distance of vectors of streams: the supremum of component distances.
pub fn product_distance(fs: &[Stream], gs: &[Stream], depth: usize) -> Result<Dyadic> {
    if fs.len() != gs.len() || fs.is_empty() {
        return Err(Error::ArityMismatch {
            expected: fs.len().max(1),
            found: gs.len(),
        });
    }
    let mut sup = Dyadic::AtMost(depth);
    for (f, g) in fs.iter().zip(gs) {
        sup = sup.max(distance(f, g, depth)?);
    }
    Ok(sup)
}

/// Hausdorff distance between finite sets of equal-length words.
pub fn hausdorff(p: &PrefixSet, q: &PrefixSet) -> Result<Dyadic> {
    if p.is_empty() || q.is_empty() {
        return Err(Error::EmptySet);
    }
    if p.domain() != q.domain() {
        return Err(Error::mismatch(p.domain(), q.domain()));
    }
    if p.length() != q.length() {
        return Err(Error::LengthMismatch {
            expected: p.length(),
            found: q.length(),
        });
    }
    let directed = |a: &PrefixSet, b: &PrefixSet| {
        a.iter()
            .map(|x| {
                if b.contains(x) {
                    return Dyadic::AtMost(x.len());
                }
                let (below, above) = b.neighbors(x);
                below.into_iter().chain(above).map(|y| word_distance(x, y)).min().unwrap()
            })
            .max()
            .unwrap()
    };
    Ok(directed(p, q).max(directed(q, p)))
}

/// The closed ball of radius `2^-k` around any stream extending a length-`k`
/// word. Every member is a center.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ball {
    center: Prefix,
}

impl Ball {
    pub fn new(center: Prefix) -> Ball {
        Ball { center }
    }

    pub fn around(f: &Stream, radius_exponent: usize) -> Ball {
        Ball::new(f.prefix(radius_exponent))
    }

    pub fn center(&self) -> &Prefix {
        &self.center
    }

    pub fn radius(&self) -> Dyadic {
        Dyadic::Exact(self.center.len())
    }

    pub fn contains(&self, f: &Stream) -> Result<bool> {
        if f.domain() != self.center.domain() {
            return Err(Error::mismatch(self.center.domain(), f.domain()));
        }
        Ok(f.prefix(self.center.len()) == self.center)
    }

    pub fn contains_prefix(&self, p: &Prefix) -> bool {
        self.center.is_prefix_of(p)
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B[{}, {}]", self.center, self.radius())
    }
}
