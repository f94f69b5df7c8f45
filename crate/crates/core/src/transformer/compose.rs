use std::sync::Arc;

use super::{Delay, DetTransformer, NDetTransformer, Transformer};
use crate::coeff::{Coeff, Domain};
use crate::error::{Error, Result};
use crate::prefix::{Prefix, PrefixSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Combinator {
    /// `S ; T`, feed the output of `S` into `T`.
    Seq,
    /// `f ↦ (S(f), T(f))` with the output components concatenated.
    Par,
    /// Union of images.
    Angelic,
    /// Intersection of images.
    Demonic,
}

impl Combinator {
    pub fn symbol(self) -> &'static str {
        match self {
            Combinator::Seq => ";",
            Combinator::Par => "⊗",
            Combinator::Angelic => "⊔",
            Combinator::Demonic => "⊓",
        }
    }

    /// The delay of the composite given the operand delays.
    pub fn delay(self, s: Delay, t: Delay) -> Delay {
        match self {
            Combinator::Seq => Delay(s.0 + t.0),
            Combinator::Par | Combinator::Angelic | Combinator::Demonic => Delay(s.0.min(t.0)),
        }
    }
}

fn arity_error(expected: &Domain, found: &Domain) -> Error {
    if expected.arity() != found.arity() {
        Error::ArityMismatch {
            expected: expected.arity(),
            found: found.arity(),
        }
    } else {
        Error::mismatch(expected, found)
    }
}

fn concat_letters(a: &Coeff, b: &Coeff) -> Coeff {
    let mut parts = a.components();
    parts.extend(b.components());
    Coeff::tuple(parts)
}

fn concat_words(out: &Domain, a: &Prefix, b: &Prefix) -> Prefix {
    let word = a.word().iter().zip(b.word()).map(|(x, y)| concat_letters(x, y)).collect();
    Prefix::new_unchecked(out.clone(), word)
}

/// Composes two transformers. Deterministic operands stay deterministic
/// under `Seq` and `Par`; every other combination yields a
/// nondeterministic transformer.
pub fn compose(kind: Combinator, s: &Transformer, t: &Transformer) -> Result<Transformer> {
    let name = format!("({} {} {})", s.name(), kind.symbol(), t.name());
    let delay = kind.delay(s.delay(), t.delay());
    match kind {
        Combinator::Seq => {
            if s.output() != t.input() {
                return Err(arity_error(t.input(), s.output()));
            }
            if let (Transformer::Det(a), Transformer::Det(b)) = (s, t) {
                let (fa, fb) = (Arc::clone(a.word_fn()), Arc::clone(b.word_fn()));
                return Ok(DetTransformer::new(name, a.input().clone(), b.output().clone(), delay, move |p| fb(&fa(p)))
                    .into());
            }
            let (a, b) = (s.clone(), t.clone());
            let out = t.output().clone();
            Ok(NDetTransformer::new(
                name,
                s.input().clone(),
                t.output().clone(),
                delay,
                s.branching().saturating_mul(t.branching()),
                move |p| {
                    let mut acc = PrefixSet::empty(out.clone(), p.len() + delay.0);
                    for mid in a.apply(p).expect("checked input").iter() {
                        for w in b.apply(mid).expect("checked input").iter() {
                            acc.insert(w.clone()).expect("uniform image length");
                        }
                    }
                    acc
                },
            )
            .into())
        }
        Combinator::Par => {
            if s.input() != t.input() {
                return Err(arity_error(s.input(), t.input()));
            }
            let mut parts = s.output().components();
            parts.extend(t.output().components());
            let out = Domain::product(parts);
            if let (Transformer::Det(a), Transformer::Det(b)) = (s, t) {
                let (fa, fb) = (Arc::clone(a.word_fn()), Arc::clone(b.word_fn()));
                let dom = out.clone();
                return Ok(DetTransformer::new(name, a.input().clone(), out, delay, move |p| {
                    let n = p.len() + delay.0;
                    concat_words(&dom, &fa(p).truncate(n), &fb(p).truncate(n))
                })
                .into());
            }
            let (a, b) = (s.clone(), t.clone());
            let dom = out.clone();
            Ok(NDetTransformer::new(
                name,
                s.input().clone(),
                out,
                delay,
                s.branching().saturating_mul(t.branching()),
                move |p| {
                    let n = p.len() + delay.0;
                    let left = a.apply(p).expect("checked input").truncate(n);
                    let right = b.apply(p).expect("checked input").truncate(n);
                    let mut acc = PrefixSet::empty(dom.clone(), n);
                    for x in left.iter() {
                        for y in right.iter() {
                            acc.insert(concat_words(&dom, x, y)).expect("uniform image length");
                        }
                    }
                    acc
                },
            )
            .into())
        }
        Combinator::Angelic | Combinator::Demonic => {
            if s.input() != t.input() {
                return Err(arity_error(s.input(), t.input()));
            }
            if s.output() != t.output() {
                return Err(arity_error(s.output(), t.output()));
            }
            let (a, b) = (s.clone(), t.clone());
            let branching = if kind == Combinator::Angelic {
                s.branching().saturating_add(t.branching())
            } else {
                s.branching().min(t.branching())
            };
            Ok(NDetTransformer::new(name, s.input().clone(), s.output().clone(), delay, branching, move |p| {
                let n = p.len() + delay.0;
                let left = a.apply(p).expect("checked input").truncate(n);
                let right = b.apply(p).expect("checked input").truncate(n);
                if kind == Combinator::Angelic {
                    left.union(&right).expect("same output domain")
                } else {
                    left.intersection(&right).expect("same output domain")
                }
            })
            .into())
        }
    }
}
