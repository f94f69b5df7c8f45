//! Stream transformers as delay-certified word functions.
//!
//! A δ-causal transformer is determined by what it does on finite words: a
//! length-`k` input word fixes the first `k + δ` output coefficients. The
//! deterministic form maps a word to a word, the nondeterministic form maps a
//! word to a finite set of equal-length words.

mod builtins;
pub(crate) mod causality;
mod compose;

use std::fmt;
use std::sync::Arc;

pub use builtins::{
    abort, adder, builtin, cons_a, copy, identity, magic, mix, mix_eager, register, scale, succ, unit_delay,
};
pub(crate) use builtins::mix_image;
pub use causality::{
    check_causality, check_consistency, check_strong_contraction, contraction_violation, refines,
    CausalityVerdict, Refinement,
};
pub use compose::{compose, Combinator};

use crate::coeff::Domain;
use crate::error::{Error, Result};
use crate::prefix::{Prefix, PrefixSet};
use crate::stream::Stream;

pub type WordFn = Arc<dyn Fn(&Prefix) -> Prefix + Send + Sync>;
pub type BranchFn = Arc<dyn Fn(&Prefix) -> PrefixSet + Send + Sync>;

/// Number of output coefficients fixed beyond the inspected input.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Delay(pub usize);

impl Delay {
    pub fn get(self) -> usize {
        self.0
    }

    pub fn is_strong(self) -> bool {
        self.0 >= 1
    }
}

impl fmt::Display for Delay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn check_input(name: &str, domain: &Domain, p: &Prefix) -> Result<()> {
    if p.domain() != domain {
        if p.domain().arity() != domain.arity() {
            return Err(Error::ArityMismatch {
                expected: domain.arity(),
                found: p.domain().arity(),
            });
        }
        return Err(Error::DomainMismatch {
            expected: format!("{domain} (input of `{name}`)"),
            found: p.domain().to_string(),
        });
    }
    Ok(())
}

#[derive(Clone)]
pub struct DetTransformer {
    name: String,
    input: Domain,
    output: Domain,
    delay: Delay,
    word: WordFn,
}

impl fmt::Debug for DetTransformer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DetTransformer")
            .field("name", &self.name)
            .field("input", &self.input)
            .field("output", &self.output)
            .field("delay", &self.delay)
            .finish()
    }
}

impl DetTransformer {
    /// `word` must map a length-`k` word to a length-`k + delay` word and be
    /// consistent under extension of its argument.
    pub fn new<F>(name: impl Into<String>, input: Domain, output: Domain, delay: Delay, word: F) -> Self
    where
        F: Fn(&Prefix) -> Prefix + Send + Sync + 'static,
    {
        DetTransformer {
            name: name.into(),
            input,
            output,
            delay,
            word: Arc::new(word),
        }
    }

    /// Builds the word function from a stream map: the input word is padded
    /// with default letters and the first `k + delay` output coefficients are
    /// kept. Sound whenever the map really is `delay`-causal.
    pub fn from_stream_map<F>(name: impl Into<String>, input: Domain, output: Domain, delay: Delay, map: F) -> Self
    where
        F: Fn(&Stream) -> Stream + Send + Sync + 'static,
    {
        DetTransformer::new(name, input, output, delay, move |p: &Prefix| {
            map(&Stream::from_prefix(p)).prefix(p.len() + delay.0)
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn input(&self) -> &Domain {
        &self.input
    }

    pub fn output(&self) -> &Domain {
        &self.output
    }

    pub fn delay(&self) -> Delay {
        self.delay
    }

    pub fn arity_in(&self) -> usize {
        self.input.arity()
    }

    pub fn arity_out(&self) -> usize {
        self.output.arity()
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn apply(&self, p: &Prefix) -> Result<Prefix> {
        check_input(&self.name, &self.input, p)?;
        let out = (self.word)(p);
        debug_assert_eq!(out.len(), p.len() + self.delay.0, "word function of `{}`", self.name);
        Ok(out)
    }

    pub(crate) fn word_fn(&self) -> &WordFn {
        &self.word
    }

    /// The transformer as a lazy map on a single (possibly tuple) stream.
    pub fn lift_stream(&self, input: &Stream) -> Result<Stream> {
        if input.domain() != &self.input {
            return Err(Error::mismatch(&self.input, input.domain()));
        }
        let input = input.clone();
        let word = Arc::clone(&self.word);
        let delay = self.delay.0;
        Ok(Stream::from_fn(self.output.clone(), move |j| {
            let seen = (j + 1).saturating_sub(delay);
            let out = word(&input.prefix(seen));
            out.letter(j).expect("word function output too short").clone()
        }))
    }

    /// Applies the transformer to a vector of component streams and returns
    /// the output components.
    pub fn lift(&self, inputs: &[Stream]) -> Result<Vec<Stream>> {
        if inputs.len() != self.arity_in() {
            return Err(Error::ArityMismatch {
                expected: self.arity_in(),
                found: inputs.len(),
            });
        }
        let out = self.lift_stream(&Stream::zip(inputs)?)?;
        Ok(out.unzip())
    }

    pub fn to_ndet(&self) -> NDetTransformer {
        NDetTransformer::from_det(self)
    }
}

#[derive(Clone)]
pub struct NDetTransformer {
    name: String,
    input: Domain,
    output: Domain,
    delay: Delay,
    branching: usize,
    branch: BranchFn,
}

impl fmt::Debug for NDetTransformer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NDetTransformer")
            .field("name", &self.name)
            .field("input", &self.input)
            .field("output", &self.output)
            .field("delay", &self.delay)
            .field("branching", &self.branching)
            .finish()
    }
}

impl NDetTransformer {
    /// `branch` maps a length-`k` word to a set of length-`k + delay` words;
    /// `branching` bounds the number of continuations per output letter.
    pub fn new<F>(
        name: impl Into<String>,
        input: Domain,
        output: Domain,
        delay: Delay,
        branching: usize,
        branch: F,
    ) -> Self
    where
        F: Fn(&Prefix) -> PrefixSet + Send + Sync + 'static,
    {
        NDetTransformer {
            name: name.into(),
            input,
            output,
            delay,
            branching,
            branch: Arc::new(branch),
        }
    }

    /// The singleton-image embedding of a deterministic transformer.
    pub fn from_det(t: &DetTransformer) -> Self {
        let word = Arc::clone(&t.word);
        NDetTransformer::new(t.name.clone(), t.input.clone(), t.output.clone(), t.delay, 1, move |p| {
            PrefixSet::singleton(word(p))
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn input(&self) -> &Domain {
        &self.input
    }

    pub fn output(&self) -> &Domain {
        &self.output
    }

    pub fn delay(&self) -> Delay {
        self.delay
    }

    pub fn branching(&self) -> usize {
        self.branching
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn apply(&self, p: &Prefix) -> Result<PrefixSet> {
        check_input(&self.name, &self.input, p)?;
        let out = (self.branch)(p);
        debug_assert_eq!(out.length(), p.len() + self.delay.0, "branch function of `{}`", self.name);
        Ok(out)
    }
}

/// Either kind of transformer.
#[derive(Clone, Debug)]
pub enum Transformer {
    Det(DetTransformer),
    NDet(NDetTransformer),
}

impl From<DetTransformer> for Transformer {
    fn from(t: DetTransformer) -> Self {
        Transformer::Det(t)
    }
}

impl From<NDetTransformer> for Transformer {
    fn from(t: NDetTransformer) -> Self {
        Transformer::NDet(t)
    }
}

impl Transformer {
    pub fn name(&self) -> &str {
        match self {
            Transformer::Det(t) => t.name(),
            Transformer::NDet(t) => t.name(),
        }
    }

    pub fn input(&self) -> &Domain {
        match self {
            Transformer::Det(t) => t.input(),
            Transformer::NDet(t) => t.input(),
        }
    }

    pub fn output(&self) -> &Domain {
        match self {
            Transformer::Det(t) => t.output(),
            Transformer::NDet(t) => t.output(),
        }
    }

    pub fn delay(&self) -> Delay {
        match self {
            Transformer::Det(t) => t.delay(),
            Transformer::NDet(t) => t.delay(),
        }
    }

    pub fn branching(&self) -> usize {
        match self {
            Transformer::Det(_) => 1,
            Transformer::NDet(t) => t.branching(),
        }
    }

    pub fn is_deterministic(&self) -> bool {
        matches!(self, Transformer::Det(_))
    }

    pub fn as_det(&self) -> Option<&DetTransformer> {
        match self {
            Transformer::Det(t) => Some(t),
            Transformer::NDet(_) => None,
        }
    }

    /// The set of admissible output words for an input word.
    pub fn apply(&self, p: &Prefix) -> Result<PrefixSet> {
        match self {
            Transformer::Det(t) => t.apply(p).map(PrefixSet::singleton),
            Transformer::NDet(t) => t.apply(p),
        }
    }

    pub fn to_ndet(&self) -> NDetTransformer {
        match self {
            Transformer::Det(t) => t.to_ndet(),
            Transformer::NDet(t) => t.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Coeff;

    fn q() -> Domain {
        Domain::Rational
    }

    fn ramp() -> Stream {
        Stream::ramp(&q(), Coeff::int(1), Coeff::int(1)).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Coeff> {
        v.iter().map(|&n| Coeff::int(n)).collect()
    }

    #[test]
    fn lift_examples() {
        let d1 = unit_delay(&q()).unwrap();
        let out = d1.lift(&[ramp()]).unwrap();
        assert_eq!(out[0].prefix(4).word(), &ints(&[0, 1, 2, 3])[..]);

        let tens = Stream::ramp(&q(), Coeff::int(10), Coeff::int(10)).unwrap();
        let sum = adder(&q()).unwrap().lift(&[ramp(), tens]).unwrap();
        assert_eq!(sum[0].prefix(3).word(), &ints(&[11, 22, 33])[..]);

        let ones = Stream::periodic(&q(), ints(&[1])).unwrap();
        let tripled = scale(&q(), Coeff::int(3)).unwrap().lift(&[ones]).unwrap();
        assert_eq!(tripled[0].prefix(4).word(), &ints(&[3, 3, 3, 3])[..]);

        assert!(d1.lift(&[ramp(), ramp()]).is_err());
    }

    #[test]
    fn apply_ndet_examples() {
        let d1 = unit_delay(&Domain::Gf2).unwrap();
        let p = Prefix::parse(&Domain::Gf2, &["1"]).unwrap();
        let img = Transformer::from(d1.clone()).apply(&p).unwrap();
        assert_eq!(img.len(), 1);

        let choice = compose(Combinator::Angelic, &d1.clone().into(), &cons_a(&Domain::Gf2, Coeff::bit(true)).unwrap().into())
            .unwrap();
        let img = choice.apply(&p).unwrap();
        let words: Vec<String> = img.iter().map(ToString::to_string).collect();
        assert_eq!(words, ["(0,1)", "(1,1)"]);

        let nothing = magic(&Domain::Gf2, &Domain::Gf2, Delay(1));
        assert!(nothing.apply(&p).unwrap().is_empty());
    }

    #[test]
    fn arity_is_checked_on_apply() {
        let a = adder(&q()).unwrap();
        let p = Prefix::parse(&q(), &["1"]).unwrap();
        assert!(matches!(a.apply(&p), Err(Error::ArityMismatch { .. })));
    }
}
