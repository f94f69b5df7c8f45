//! Coefficient domains for stream values.
//!
//! Three scalar domains are supported: the Boolean field GF(2), exact
//! rationals backed by arbitrary-precision integers, and finite enumerated
//! alphabets. Alphabets carry equality and a total order but no arithmetic.
//! Vector values are tuples of coefficients over a [`Domain::Product`]; they
//! are compared letterwise and never treated as a field.

use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Domain {
    Gf2,
    Rational,
    Alphabet(Arc<[String]>),
    Product(Arc<[Domain]>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coeff {
    Bit(bool),
    Rat(BigRational),
    /// Index into the alphabet of the surrounding domain.
    Sym(u32),
    Tuple(Arc<[Coeff]>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Neg,
    Inv,
}

impl Domain {
    pub fn alphabet<I, S>(symbols: I) -> Result<Domain>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::BadParams {
                name: "alphabet".into(),
                reason: "an alphabet needs at least one symbol".into(),
            });
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(Error::BadParams {
                    name: "alphabet".into(),
                    reason: format!("duplicate symbol `{s}`"),
                });
            }
        }
        Ok(Domain::Alphabet(symbols.into()))
    }

    /// Product of the given components. A single component is returned as is.
    pub fn product(mut components: Vec<Domain>) -> Domain {
        if components.len() == 1 {
            components.pop().unwrap()
        } else {
            Domain::Product(components.into())
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Domain::Product(cs) => cs.len(),
            _ => 1,
        }
    }

    pub fn components(&self) -> Vec<Domain> {
        match self {
            Domain::Product(cs) => cs.to_vec(),
            d => vec![d.clone()],
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self, Domain::Gf2 | Domain::Rational)
    }

    pub fn zero(&self) -> Option<Coeff> {
        match self {
            Domain::Gf2 => Some(Coeff::Bit(false)),
            Domain::Rational => Some(Coeff::Rat(BigRational::zero())),
            _ => None,
        }
    }

    pub fn one(&self) -> Option<Coeff> {
        match self {
            Domain::Gf2 => Some(Coeff::Bit(true)),
            Domain::Rational => Some(Coeff::Rat(BigRational::one())),
            _ => None,
        }
    }

    /// The letter used to pad words whose tail is irrelevant: zero for
    /// fields, the first symbol for alphabets.
    pub fn default_letter(&self) -> Coeff {
        match self {
            Domain::Gf2 => Coeff::Bit(false),
            Domain::Rational => Coeff::Rat(BigRational::zero()),
            Domain::Alphabet(_) => Coeff::Sym(0),
            Domain::Product(cs) => Coeff::Tuple(cs.iter().map(Domain::default_letter).collect()),
        }
    }

    pub fn contains(&self, c: &Coeff) -> bool {
        match (self, c) {
            (Domain::Gf2, Coeff::Bit(_)) | (Domain::Rational, Coeff::Rat(_)) => true,
            (Domain::Alphabet(syms), Coeff::Sym(i)) => (*i as usize) < syms.len(),
            (Domain::Product(ds), Coeff::Tuple(cs)) => {
                ds.len() == cs.len() && ds.iter().zip(cs.iter()).all(|(d, c)| d.contains(c))
            }
            _ => false,
        }
    }

    pub(crate) fn check(&self, c: &Coeff) -> Result<()> {
        if self.contains(c) {
            Ok(())
        } else {
            Err(Error::mismatch(self, format!("{c:?}")))
        }
    }

    /// Number of letters, or `None` for infinite domains.
    pub fn letter_count(&self) -> Option<usize> {
        match self {
            Domain::Gf2 => Some(2),
            Domain::Rational => None,
            Domain::Alphabet(s) => Some(s.len()),
            Domain::Product(cs) => cs
                .iter()
                .try_fold(1usize, |acc, d| acc.checked_mul(d.letter_count()?)),
        }
    }

    /// All letters in ascending order, or `None` for infinite domains.
    pub fn letters(&self) -> Option<Vec<Coeff>> {
        match self {
            Domain::Gf2 => Some(vec![Coeff::Bit(false), Coeff::Bit(true)]),
            Domain::Rational => None,
            Domain::Alphabet(s) => Some((0..s.len() as u32).map(Coeff::Sym).collect()),
            Domain::Product(cs) => {
                let mut acc: Vec<Vec<Coeff>> = vec![Vec::new()];
                for d in cs.iter() {
                    let ls = d.letters()?;
                    acc = acc
                        .into_iter()
                        .flat_map(|prefix| {
                            ls.iter().map(move |l| {
                                let mut v = prefix.clone();
                                v.push(l.clone());
                                v
                            })
                        })
                        .collect();
                }
                Some(acc.into_iter().map(|v| Coeff::Tuple(v.into())).collect())
            }
        }
    }

    /// A finite stand-in for the letters of the domain: every letter for
    /// finite domains, a handful of small rationals otherwise.
    pub fn letter_pool(&self) -> Vec<Coeff> {
        if let Some(ls) = self.letters() {
            return ls;
        }
        match self {
            Domain::Rational => [(0, 1), (1, 1), (-1, 1), (2, 1), (1, 2)]
                .iter()
                .map(|&(n, d)| Coeff::Rat(BigRational::new(n.into(), d.into())))
                .collect(),
            Domain::Product(cs) => {
                let pools: Vec<Vec<Coeff>> = cs.iter().map(Domain::letter_pool).collect();
                let mut acc: Vec<Vec<Coeff>> = vec![Vec::new()];
                for pool in &pools {
                    acc = acc
                        .into_iter()
                        .flat_map(|prefix| {
                            pool.iter().map(move |l| {
                                let mut v = prefix.clone();
                                v.push(l.clone());
                                v
                            })
                        })
                        .collect();
                }
                acc.into_iter().map(|v| Coeff::Tuple(v.into())).collect()
            }
            _ => unreachable!("finite domains are handled above"),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Coeff {
        match self {
            Domain::Gf2 => Coeff::Bit(rng.gen()),
            Domain::Rational => {
                let n: i64 = rng.gen_range(-4..=4);
                let d: i64 = [1, 1, 1, 2, 3][rng.gen_range(0..5)];
                Coeff::Rat(BigRational::new(n.into(), d.into()))
            }
            Domain::Alphabet(s) => Coeff::Sym(rng.gen_range(0..s.len() as u32)),
            Domain::Product(cs) => Coeff::Tuple(cs.iter().map(|d| d.sample(rng)).collect()),
        }
    }

    /// A letter of this domain different from `c`, if one exists.
    pub fn other_letter<R: Rng + ?Sized>(&self, c: &Coeff, rng: &mut R) -> Option<Coeff> {
        match self.letter_count() {
            Some(1) => None,
            _ => loop {
                let candidate = self.sample(rng);
                if &candidate != c {
                    return Some(candidate);
                }
            },
        }
    }

    pub fn render(&self, c: &Coeff) -> String {
        match (self, c) {
            (Domain::Alphabet(syms), Coeff::Sym(i)) => syms
                .get(*i as usize)
                .cloned()
                .unwrap_or_else(|| format!("#{i}")),
            (Domain::Product(ds), Coeff::Tuple(cs)) => {
                let parts: Vec<String> = ds.iter().zip(cs.iter()).map(|(d, c)| d.render(c)).collect();
                format!("({})", parts.join(","))
            }
            (_, c) => c.to_string(),
        }
    }

    /// Parses the textual form of a coefficient: `0`/`1` for GF(2), `p/q` or
    /// an integer for rationals, a bare symbol for alphabets and a
    /// parenthesized comma list for tuples.
    pub fn parse(&self, text: &str) -> Result<Coeff> {
        let t = text.trim();
        let malformed = || Error::MalformedCoeff {
            text: text.to_string(),
            domain: self.to_string(),
        };
        match self {
            Domain::Gf2 => match t {
                "0" => Ok(Coeff::Bit(false)),
                "1" => Ok(Coeff::Bit(true)),
                _ => Err(malformed()),
            },
            Domain::Rational => parse_rational(t).map(Coeff::Rat).ok_or_else(malformed),
            Domain::Alphabet(syms) => syms
                .iter()
                .position(|s| s == t)
                .map(|i| Coeff::Sym(i as u32))
                .ok_or_else(malformed),
            Domain::Product(ds) => {
                let inner = t
                    .strip_prefix('(')
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(malformed)?;
                let parts = split_top_level(inner);
                if parts.len() != ds.len() {
                    return Err(malformed());
                }
                let cs = ds
                    .iter()
                    .zip(parts)
                    .map(|(d, p)| d.parse(p))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Coeff::Tuple(cs.into()))
            }
        }
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

pub(crate) fn parse_rational(t: &str) -> Option<BigRational> {
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Gf2 => f.write_str("bool"),
            Domain::Rational => f.write_str("rat"),
            Domain::Alphabet(s) => write!(f, "alphabet {{{}}}", s.join(", ")),
            Domain::Product(cs) => {
                let parts: Vec<String> = cs.iter().map(ToString::to_string).collect();
                write!(f, "({})", parts.join(" x "))
            }
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Bit(b) => f.write_str(if *b { "1" } else { "0" }),
            Coeff::Rat(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Coeff::Rat(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Coeff::Sym(i) => write!(f, "#{i}"),
            Coeff::Tuple(cs) => {
                let parts: Vec<String> = cs.iter().map(ToString::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

impl Coeff {
    pub fn bit(b: bool) -> Coeff {
        Coeff::Bit(b)
    }

    pub fn int(n: i64) -> Coeff {
        Coeff::Rat(BigRational::from_integer(n.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Result<Coeff> {
        if d == 0 {
            return Err(Error::InvOfZero);
        }
        Ok(Coeff::Rat(BigRational::new(n.into(), d.into())))
    }

    pub fn tuple(cs: Vec<Coeff>) -> Coeff {
        Coeff::Tuple(cs.into())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Bit(b) => !b,
            Coeff::Rat(r) => r.is_zero(),
            _ => false,
        }
    }

    pub fn as_bit(&self) -> Option<bool> {
        match self {
            Coeff::Bit(b) => Some(*b),
            _ => None,
        }
    }

    /// Components of a tuple letter, or the letter itself.
    pub fn components(&self) -> Vec<Coeff> {
        match self {
            Coeff::Tuple(cs) => cs.to_vec(),
            c => vec![c.clone()],
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Coeff::Bit(_) => "bool",
            Coeff::Rat(_) => "rat",
            Coeff::Sym(_) => "alphabet",
            Coeff::Tuple(_) => "tuple",
        }
    }

    pub fn add(&self, other: &Coeff) -> Result<Coeff> {
        match (self, other) {
            (Coeff::Bit(a), Coeff::Bit(b)) => Ok(Coeff::Bit(a ^ b)),
            (Coeff::Rat(a), Coeff::Rat(b)) => Ok(Coeff::Rat(a + b)),
            _ => Err(self.binary_error("add", other)),
        }
    }

    pub fn mul(&self, other: &Coeff) -> Result<Coeff> {
        match (self, other) {
            (Coeff::Bit(a), Coeff::Bit(b)) => Ok(Coeff::Bit(a & b)),
            (Coeff::Rat(a), Coeff::Rat(b)) => Ok(Coeff::Rat(a * b)),
            _ => Err(self.binary_error("mul", other)),
        }
    }

    pub fn neg(&self) -> Result<Coeff> {
        match self {
            Coeff::Bit(b) => Ok(Coeff::Bit(*b)),
            Coeff::Rat(r) => Ok(Coeff::Rat(-r)),
            _ => Err(Error::UnsupportedOp {
                op: "neg",
                domain: self.kind().into(),
            }),
        }
    }

    pub fn sub(&self, other: &Coeff) -> Result<Coeff> {
        self.add(&other.neg()?)
    }

    pub fn inv(&self) -> Result<Coeff> {
        match self {
            Coeff::Bit(true) => Ok(Coeff::Bit(true)),
            Coeff::Bit(false) => Err(Error::InvOfZero),
            Coeff::Rat(r) if r.is_zero() => Err(Error::InvOfZero),
            Coeff::Rat(r) => Ok(Coeff::Rat(r.recip())),
            _ => Err(Error::UnsupportedOp {
                op: "inv",
                domain: self.kind().into(),
            }),
        }
    }

    fn binary_error(&self, op: &'static str, other: &Coeff) -> Error {
        if self.kind() != other.kind() {
            Error::mismatch(self.kind(), other.kind())
        } else {
            Error::UnsupportedOp {
                op,
                domain: self.kind().into(),
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Coeff::Rat(r) if r.is_negative())
    }
}

/// Exact field arithmetic over GF(2) or the rationals. `b` is required for
/// the binary operations and ignored for `Neg` and `Inv`.
pub fn field_arith(op: FieldOp, a: &Coeff, b: Option<&Coeff>) -> Result<Coeff> {
    let need_b = || {
        b.ok_or(Error::BadParams {
            name: "field_arith".into(),
            reason: "binary operation without a second operand".into(),
        })
    };
    match op {
        FieldOp::Add => a.add(need_b()?),
        FieldOp::Mul => a.mul(need_b()?),
        FieldOp::Neg => a.neg(),
        FieldOp::Inv => a.inv(),
    }
}

/// Structural equality between coefficients of the same domain.
pub fn coeff_eq(a: &Coeff, b: &Coeff) -> Result<bool> {
    match (a, b) {
        (Coeff::Tuple(xs), Coeff::Tuple(ys)) => {
            if xs.len() != ys.len() {
                return Err(Error::ArityMismatch {
                    expected: xs.len(),
                    found: ys.len(),
                });
            }
            for (x, y) in xs.iter().zip(ys.iter()) {
                if !coeff_eq(x, y)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ if a.kind() == b.kind() => Ok(a == b),
        _ => Err(Error::mismatch(a.kind(), b.kind())),
    }
}
