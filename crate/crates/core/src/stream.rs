//! Lazy, memoized infinite streams viewed as formal power series.
//!
//! A [`Stream`] is a pure coefficient generator `k ↦ [X^k]f` together with a
//! cache. Coefficients are produced strictly in index order, so a generator
//! may read earlier coefficients of its own stream (recurrences such as the
//! inverse) and of streams that feed back into it. Reading a coefficient that
//! is still being computed means the definition is not productive and
//! panics, the same way a `RefCell` double borrow does.

use std::cell::RefCell;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock, Weak};

use parking_lot::ReentrantMutex;

use crate::coeff::{Coeff, Domain};
use crate::error::{Error, Result};
use crate::prefix::Prefix;

type Generator = dyn Fn(&Stream, usize) -> Coeff + Send + Sync;

#[derive(Clone)]
pub struct Stream(Arc<Node>);

struct Node {
    domain: Domain,
    generator: Box<Generator>,
    memo: ReentrantMutex<RefCell<Memo>>,
}

#[derive(Default)]
struct Memo {
    values: Vec<Coeff>,
    busy: bool,
}

struct BusyGuard<'a>(&'a RefCell<Memo>);

impl Drop for BusyGuard<'_> {
    fn drop(&mut self) {
        self.0.borrow_mut().busy = false;
    }
}

impl fmt::Debug for Stream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cached = self.0.memo.lock().borrow().values.len();
        f.debug_struct("Stream")
            .field("domain", &self.0.domain)
            .field("cached", &cached)
            .finish()
    }
}

fn require_field(d: &Domain) -> Result<()> {
    if d.is_field() {
        Ok(())
    } else {
        Err(Error::UnsupportedOp {
            op: "ring operation",
            domain: d.to_string(),
        })
    }
}

impl Stream {
    pub fn from_fn<F>(domain: Domain, f: F) -> Stream
    where
        F: Fn(usize) -> Coeff + Send + Sync + 'static,
    {
        Stream::recursive(domain, move |_, k| f(k))
    }

    /// A stream whose generator also receives the stream itself, so that
    /// coefficient `k` may depend on coefficients `0..k`.
    pub fn recursive<F>(domain: Domain, f: F) -> Stream
    where
        F: Fn(&Stream, usize) -> Coeff + Send + Sync + 'static,
    {
        Stream(Arc::new(Node {
            domain,
            generator: Box::new(f),
            memo: ReentrantMutex::new(RefCell::new(Memo::default())),
        }))
    }

    /// Builds a stream defined in terms of itself. `build` receives a
    /// placeholder that reads from the finished stream; the placeholder is
    /// sealed before any coefficient can be requested.
    pub fn feedback<F>(domain: Domain, build: F) -> Result<Stream>
    where
        F: FnOnce(&Stream) -> Result<Stream>,
    {
        let cell: Arc<OnceLock<Weak<Node>>> = Arc::new(OnceLock::new());
        let reader = Arc::clone(&cell);
        let placeholder = Stream::from_fn(domain.clone(), move |k| {
            let node = reader
                .get()
                .and_then(Weak::upgrade)
                .expect("feedback stream read before it was sealed");
            Stream(node).coefficient_at(k)
        });
        let body = build(&placeholder)?;
        if body.domain() != &domain {
            return Err(Error::mismatch(&domain, body.domain()));
        }
        cell.set(Arc::downgrade(&body.0))
            .expect("feedback cell is sealed exactly once");
        Ok(body)
    }

    pub fn domain(&self) -> &Domain {
        &self.0.domain
    }

    pub fn coefficient_at(&self, k: usize) -> Coeff {
        let guard = self.0.memo.lock();
        loop {
            let next = {
                let memo = guard.borrow();
                if let Some(c) = memo.values.get(k) {
                    return c.clone();
                }
                if memo.busy {
                    panic!(
                        "stream is not productive: coefficient {} depends on itself",
                        memo.values.len()
                    );
                }
                memo.values.len()
            };
            guard.borrow_mut().busy = true;
            let c = {
                let _reset = BusyGuard(&guard);
                (self.0.generator)(self, next)
            };
            debug_assert!(self.0.domain.contains(&c), "generator left its domain");
            guard.borrow_mut().values.push(c);
        }
    }

    /// The first `n` coefficients.
    pub fn prefix(&self, n: usize) -> Prefix {
        if n > 0 {
            self.coefficient_at(n - 1);
        }
        let guard = self.0.memo.lock();
        let word = guard.borrow().values[..n].to_vec();
        Prefix::new_unchecked(self.0.domain.clone(), word)
    }

    // --- constructors -------------------------------------------------------

    /// The embedding `(a, 0, 0, …)` of a scalar.
    pub fn scalar_const(domain: &Domain, a: Coeff) -> Result<Stream> {
        require_field(domain)?;
        domain.check(&a)?;
        let zero = domain.zero().unwrap();
        Ok(Stream::from_fn(domain.clone(), move |k| if k == 0 { a.clone() } else { zero.clone() }))
    }

    pub fn zero(domain: &Domain) -> Result<Stream> {
        require_field(domain)?;
        Stream::scalar_const(domain, domain.zero().unwrap())
    }

    pub fn one(domain: &Domain) -> Result<Stream> {
        require_field(domain)?;
        Stream::scalar_const(domain, domain.one().unwrap())
    }

    /// The indeterminate `X = (0, 1, 0, …)`.
    pub fn x(domain: &Domain) -> Result<Stream> {
        require_field(domain)?;
        Stream::polynomial(domain, vec![domain.zero().unwrap(), domain.one().unwrap()])
    }

    /// A finite coefficient list followed by zeros.
    pub fn polynomial(domain: &Domain, coeffs: Vec<Coeff>) -> Result<Stream> {
        require_field(domain)?;
        for c in &coeffs {
            domain.check(c)?;
        }
        let zero = domain.zero().unwrap();
        Ok(Stream::from_fn(domain.clone(), move |k| {
            coeffs.get(k).cloned().unwrap_or_else(|| zero.clone())
        }))
    }

    /// `(c₀, …, c_{n−1}, c₀, …)` repeated forever; works for any domain.
    pub fn periodic(domain: &Domain, cycle: Vec<Coeff>) -> Result<Stream> {
        if cycle.is_empty() {
            return Err(Error::BadParams {
                name: "periodic".into(),
                reason: "empty cycle".into(),
            });
        }
        for c in &cycle {
            domain.check(c)?;
        }
        Ok(Stream::from_fn(domain.clone(), move |k| cycle[k % cycle.len()].clone()))
    }

    /// The arithmetic progression `(a, a+b, a+2b, …)`.
    pub fn ramp(domain: &Domain, start: Coeff, step: Coeff) -> Result<Stream> {
        require_field(domain)?;
        domain.check(&start)?;
        domain.check(&step)?;
        Ok(Stream::recursive(domain.clone(), move |this, k| {
            if k == 0 {
                start.clone()
            } else {
                this.coefficient_at(k - 1).add(&step).expect("domain checked")
            }
        }))
    }

    /// The word followed by the domain's default letter forever. Only the
    /// first `p.len()` coefficients carry information.
    pub fn from_prefix(p: &Prefix) -> Stream {
        let pad = p.domain().default_letter();
        let word = p.word().to_vec();
        Stream::from_fn(p.domain().clone(), move |k| word.get(k).cloned().unwrap_or_else(|| pad.clone()))
    }

    // --- pointwise ----------------------------------------------------------

    pub fn map<F>(&self, domain: Domain, f: F) -> Stream
    where
        F: Fn(&Coeff) -> Coeff + Send + Sync + 'static,
    {
        let s = self.clone();
        Stream::from_fn(domain, move |k| f(&s.coefficient_at(k)))
    }

    pub fn zip_with<F>(&self, other: &Stream, domain: Domain, f: F) -> Stream
    where
        F: Fn(&Coeff, &Coeff) -> Coeff + Send + Sync + 'static,
    {
        let (a, b) = (self.clone(), other.clone());
        Stream::from_fn(domain, move |k| f(&a.coefficient_at(k), &b.coefficient_at(k)))
    }

    /// The stream of tuples of the given component streams.
    pub fn zip(parts: &[Stream]) -> Result<Stream> {
        match parts {
            [] => Err(Error::ArityMismatch {
                expected: 1,
                found: 0,
            }),
            [single] => Ok(single.clone()),
            _ => {
                let domain = Domain::product(parts.iter().map(|s| s.domain().clone()).collect());
                let parts = parts.to_vec();
                Ok(Stream::from_fn(domain, move |k| {
                    Coeff::tuple(parts.iter().map(|s| s.coefficient_at(k)).collect())
                }))
            }
        }
    }

    /// Component `i` of a tuple stream.
    pub fn project(&self, i: usize) -> Result<Stream> {
        match self.domain() {
            Domain::Product(ds) if i < ds.len() => {
                let s = self.clone();
                Ok(Stream::from_fn(ds[i].clone(), move |k| match s.coefficient_at(k) {
                    Coeff::Tuple(cs) => cs[i].clone(),
                    _ => unreachable!("product domains hold tuple letters"),
                }))
            }
            d if i == 0 && d.arity() == 1 => Ok(self.clone()),
            d => Err(Error::ArityMismatch {
                expected: i + 1,
                found: d.arity(),
            }),
        }
    }

    pub fn unzip(&self) -> Vec<Stream> {
        (0..self.domain().arity())
            .map(|i| self.project(i).expect("index within arity"))
            .collect()
    }

    // --- ring operations ----------------------------------------------------

    fn same_field(&self, other: &Stream) -> Result<()> {
        if self.domain() != other.domain() {
            return Err(Error::mismatch(self.domain(), other.domain()));
        }
        require_field(self.domain())
    }

    pub fn add(&self, other: &Stream) -> Result<Stream> {
        self.same_field(other)?;
        Ok(self.zip_with(other, self.domain().clone(), |a, b| a.add(b).expect("domain checked")))
    }

    pub fn sub(&self, other: &Stream) -> Result<Stream> {
        self.same_field(other)?;
        Ok(self.zip_with(other, self.domain().clone(), |a, b| a.sub(b).expect("domain checked")))
    }

    pub fn neg(&self) -> Result<Stream> {
        require_field(self.domain())?;
        Ok(self.map(self.domain().clone(), |a| a.neg().expect("domain checked")))
    }

    /// Product by discrete convolution.
    pub fn mul(&self, other: &Stream) -> Result<Stream> {
        self.same_field(other)?;
        let (a, b) = (self.clone(), other.clone());
        let zero = self.domain().zero().unwrap();
        Ok(Stream::from_fn(self.domain().clone(), move |k| {
            // The lower-index factor is read first and a zero skips its
            // partner, so `X·f` never touches `f_k` while computing index `k`.
            (0..=k).fold(zero.clone(), |acc, i| {
                let (x, i, y, j) = if i <= k - i { (&a, i, &b, k - i) } else { (&b, k - i, &a, i) };
                let first = x.coefficient_at(i);
                if first.is_zero() {
                    return acc;
                }
                let term = first.mul(&y.coefficient_at(j)).expect("domain checked");
                acc.add(&term).expect("domain checked")
            })
        }))
    }

    /// Coefficientwise multiplication by a scalar.
    pub fn scalar(&self, a: &Coeff) -> Result<Stream> {
        require_field(self.domain())?;
        self.domain().check(a)?;
        let a = a.clone();
        Ok(self.map(self.domain().clone(), move |c| a.mul(c).expect("domain checked")))
    }

    /// `a + X·f`: head `a`, then `f` shifted by one. `cons(0, f)` is the unit
    /// delay. Works over any domain.
    pub fn cons(a: Coeff, f: &Stream) -> Result<Stream> {
        f.domain().check(&a)?;
        let f = f.clone();
        Ok(Stream::from_fn(f.domain().clone(), move |k| {
            if k == 0 {
                a.clone()
            } else {
                f.coefficient_at(k - 1)
            }
        }))
    }

    pub fn head(&self) -> Coeff {
        self.coefficient_at(0)
    }

    pub fn tail(&self) -> Stream {
        let f = self.clone();
        Stream::from_fn(self.domain().clone(), move |k| f.coefficient_at(k + 1))
    }

    /// Multiplicative inverse; exists iff the constant coefficient is nonzero.
    pub fn inverse(&self) -> Result<Stream> {
        require_field(self.domain())?;
        let a0 = self.coefficient_at(0);
        if a0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let minus_inv = a0.inv()?.neg()?;
        let inv = a0.inv()?;
        let a = self.clone();
        let zero = self.domain().zero().unwrap();
        Ok(Stream::recursive(self.domain().clone(), move |g, k| {
            if k == 0 {
                return inv.clone();
            }
            let sum = (1..=k).fold(zero.clone(), |acc, i| {
                acc.add(&a.coefficient_at(i).mul(&g.coefficient_at(k - i)).unwrap())
                    .unwrap()
            });
            minus_inv.mul(&sum).unwrap()
        }))
    }

    /// Functional composition `outer(inner(X))`. The inner series must have
    /// zero constant coefficient so that every output coefficient is a finite
    /// sum.
    pub fn fcompose(outer: &Stream, inner: &Stream) -> Result<Stream> {
        outer.same_field(inner)?;
        if !inner.coefficient_at(0).is_zero() {
            return Err(Error::InnerConstantTermNonzero);
        }
        let domain = outer.domain().clone();
        let powers = Arc::new(Mutex::new(vec![Stream::one(&domain)?]));
        let (outer, inner) = (outer.clone(), inner.clone());
        let zero = domain.zero().unwrap();
        Ok(Stream::from_fn(domain, move |k| {
            let needed: Vec<Stream> = {
                let mut ps = powers.lock().expect("power cache poisoned");
                while ps.len() <= k {
                    let next = ps.last().unwrap().mul(&inner).expect("domain checked");
                    ps.push(next);
                }
                ps[..=k].to_vec()
            };
            needed.iter().enumerate().fold(zero.clone(), |acc, (n, p)| {
                let b = outer.coefficient_at(n);
                if b.is_zero() {
                    acc
                } else {
                    acc.add(&b.mul(&p.coefficient_at(k)).unwrap()).unwrap()
                }
            })
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigRational;
    use proptest::prelude::*;

    fn q() -> Domain {
        Domain::Rational
    }

    fn ints(v: &[i64]) -> Vec<Coeff> {
        v.iter().map(|&n| Coeff::int(n)).collect()
    }

    fn bits(v: &[u8]) -> Vec<Coeff> {
        v.iter().map(|&b| Coeff::bit(b == 1)).collect()
    }

    fn poly_q(v: &[i64]) -> Stream {
        Stream::polynomial(&q(), ints(v)).unwrap()
    }

    fn naturals_from_one() -> Stream {
        Stream::ramp(&q(), Coeff::int(1), Coeff::int(1)).unwrap()
    }

    fn ones() -> Stream {
        Stream::periodic(&q(), ints(&[1])).unwrap()
    }

    #[test]
    fn coefficient_basics() {
        assert_eq!(Stream::one(&q()).unwrap().coefficient_at(0), Coeff::int(1));
        let x = Stream::x(&q()).unwrap();
        assert_eq!(x.coefficient_at(1), Coeff::int(1));
        assert_eq!(x.coefficient_at(0), Coeff::int(0));
        let geometric = poly_q(&[1, -1]).inverse().unwrap();
        assert_eq!(geometric.coefficient_at(7), Coeff::int(1));
    }

    #[test]
    fn prefix_basics() {
        assert!(ones().prefix(0).is_empty());
        assert_eq!(Stream::x(&q()).unwrap().prefix(3).word(), &ints(&[0, 1, 0])[..]);
        assert_eq!(poly_q(&[1, -1]).inverse().unwrap().prefix(4).word(), &ints(&[1, 1, 1, 1])[..]);
    }

    #[test]
    fn addition_examples() {
        let f = naturals_from_one();
        let z = Stream::zero(&q()).unwrap();
        assert_eq!(f.add(&z).unwrap().prefix(10), f.prefix(10));

        let a = Stream::polynomial(&Domain::Gf2, bits(&[1, 1])).unwrap();
        let b = Stream::polynomial(&Domain::Gf2, bits(&[1, 0, 1])).unwrap();
        assert_eq!(a.add(&b).unwrap().prefix(4).word(), &bits(&[0, 1, 1, 0])[..]);

        let doubled = f.add(&f).unwrap().prefix(5);
        assert_eq!(doubled.word(), &ints(&[2, 4, 6, 8, 10])[..]);
    }

    #[test]
    fn multiplication_examples() {
        let f = naturals_from_one();
        let one = Stream::one(&q()).unwrap();
        assert_eq!(f.mul(&one).unwrap().prefix(12), f.prefix(12));

        let prod = ones().mul(&poly_q(&[1, -1])).unwrap();
        assert_eq!(prod.prefix(6).word(), &ints(&[1, 0, 0, 0, 0, 0])[..]);

        let one_plus_x = Stream::polynomial(&Domain::Gf2, bits(&[1, 1])).unwrap();
        let sq = one_plus_x.mul(&one_plus_x).unwrap();
        assert_eq!(sq.prefix(5).word(), &bits(&[1, 0, 1, 0, 0])[..]);
    }

    #[test]
    fn scalar_examples() {
        let f = naturals_from_one();
        assert_eq!(f.scalar(&Coeff::int(1)).unwrap().prefix(8), f.prefix(8));
        assert!(f.scalar(&Coeff::int(0)).unwrap().prefix(8).word().iter().all(Coeff::is_zero));
        assert_eq!(f.scalar(&Coeff::int(2)).unwrap().prefix(3).word(), &ints(&[2, 4, 6])[..]);
        assert!(f.scalar(&Coeff::bit(true)).is_err());
    }

    #[test]
    fn cons_examples() {
        let f = naturals_from_one();
        assert_eq!(Stream::cons(Coeff::int(0), &f).unwrap().prefix(4).word(), &ints(&[0, 1, 2, 3])[..]);
        let z = Stream::zero(&q()).unwrap();
        assert_eq!(Stream::cons(Coeff::int(5), &z).unwrap().prefix(3).word(), &ints(&[5, 0, 0])[..]);
        let rebuilt = Stream::cons(f.head(), &f.tail()).unwrap();
        assert_eq!(rebuilt.prefix(20), f.prefix(20));
        assert!(Stream::cons(Coeff::bit(true), &f).is_err());
    }

    #[test]
    fn cons_works_over_alphabets() {
        let ab = Domain::alphabet(["a", "b"]).unwrap();
        let bs = Stream::periodic(&ab, vec![Coeff::Sym(1)]).unwrap();
        let s = Stream::cons(Coeff::Sym(0), &bs).unwrap();
        assert_eq!(s.prefix(3).to_strings(), ["a", "b", "b"]);
        assert!(bs.add(&bs).is_err());
    }

    #[test]
    fn inverse_examples() {
        let one = Stream::one(&q()).unwrap();
        assert_eq!(one.inverse().unwrap().prefix(6), one.prefix(6));

        let g = poly_q(&[2, -1]).inverse().unwrap();
        for k in 0..10 {
            let expected = BigRational::new(1.into(), num::BigInt::from(2).pow(k as u32 + 1));
            assert_eq!(g.coefficient_at(k), Coeff::Rat(expected));
        }
        let check = poly_q(&[2, -1]).mul(&g).unwrap().prefix(16);
        assert_eq!(check, one.prefix(16));

        assert_eq!(Stream::x(&q()).unwrap().inverse().unwrap_err(), Error::NotInvertible);
    }

    #[test]
    fn composition_examples() {
        let f = naturals_from_one();
        let x = Stream::x(&q()).unwrap();
        assert_eq!(Stream::fcompose(&f, &x).unwrap().prefix(10), f.prefix(10));

        let x2 = poly_q(&[0, 0, 1]);
        let x_plus_x2 = poly_q(&[0, 1, 1]);
        let c = Stream::fcompose(&x2, &x_plus_x2).unwrap();
        assert_eq!(c.prefix(7).word(), &ints(&[0, 0, 1, 2, 1, 0, 0])[..]);

        let geo = Stream::fcompose(&ones(), &poly_q(&[0, 2])).unwrap();
        assert_eq!(geo.prefix(4).word(), &ints(&[1, 2, 4, 8])[..]);
        let check = poly_q(&[1, -2]).mul(&geo).unwrap().prefix(16);
        assert_eq!(check, Stream::one(&q()).unwrap().prefix(16));
    }

    #[test]
    fn composition_requires_zero_inner_constant() {
        let err = Stream::fcompose(&ones(), &poly_q(&[1, 1])).unwrap_err();
        assert_eq!(err, Error::InnerConstantTermNonzero);
        // only the inner series is constrained; a nonzero outer constant is fine
        assert!(Stream::fcompose(&poly_q(&[3, 1]), &poly_q(&[0, 1])).is_ok());
    }

    #[test]
    fn feedback_builds_geometric_series() {
        let d = q();
        let f = Stream::feedback(d.clone(), |f| {
            let xf = Stream::x(&d)?.mul(f)?;
            Stream::one(&d)?.add(&xf)
        })
        .unwrap();
        assert_eq!(f.prefix(6).word(), &ints(&[1, 1, 1, 1, 1, 1])[..]);
    }

    #[test]
    #[should_panic(expected = "not productive")]
    fn unproductive_feedback_panics() {
        let d = q();
        let f = Stream::feedback(d.clone(), |f| f.add(&Stream::one(&d)?)).unwrap();
        f.coefficient_at(0);
    }

    #[test]
    fn tuple_streams_zip_and_project() {
        let a = naturals_from_one();
        let b = ones();
        let z = Stream::zip(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(z.domain().arity(), 2);
        assert_eq!(z.project(0).unwrap().prefix(5), a.prefix(5));
        assert_eq!(z.unzip()[1].prefix(5), b.prefix(5));
        assert!(z.project(2).is_err());
    }

    #[test]
    fn memo_is_shared_between_threads() {
        let cat = Stream::feedback(q(), |f| {
            let d = q();
            Stream::one(&d)?.add(&Stream::x(&d)?.mul(&f.mul(f)?)?)
        })
        .unwrap();
        let handles: Vec<_> = (0..4)
            .map(|t| {
                let s = cat.clone();
                std::thread::spawn(move || s.prefix(20 + t))
            })
            .collect();
        let results: Vec<Prefix> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        for r in &results {
            assert_eq!(r.truncate(20), results[0].truncate(20));
        }
    }

    // Independent oracle: dense polynomial arithmetic on plain vectors.
    fn conv(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
        (0..n)
            .map(|k| (0..=k).map(|i| a.get(i).unwrap_or(&0) * b.get(k - i).unwrap_or(&0)).sum())
            .collect()
    }

    fn ord(v: &[i64]) -> Option<usize> {
        v.iter().position(|&c| c != 0)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_laws_hold_to_depth_32(
            a in proptest::collection::vec(-5i64..5, 1..40),
            b in proptest::collection::vec(-5i64..5, 1..40),
            c in proptest::collection::vec(-5i64..5, 1..40),
        ) {
            let (f, g, h) = (poly_q(&a), poly_q(&b), poly_q(&c));
            let n = 32;
            prop_assert_eq!(f.add(&g).unwrap().prefix(n), g.add(&f).unwrap().prefix(n));
            prop_assert_eq!(f.mul(&g).unwrap().prefix(n), g.mul(&f).unwrap().prefix(n));
            prop_assert_eq!(
                f.add(&g).unwrap().add(&h).unwrap().prefix(n),
                f.add(&g.add(&h).unwrap()).unwrap().prefix(n)
            );
            prop_assert_eq!(
                f.mul(&g).unwrap().mul(&h).unwrap().prefix(n),
                f.mul(&g.mul(&h).unwrap()).unwrap().prefix(n)
            );
            prop_assert_eq!(
                f.mul(&g.add(&h).unwrap()).unwrap().prefix(n),
                f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap().prefix(n)
            );
            prop_assert_eq!(f.mul(&g).unwrap().prefix(n).into_word(), ints(&conv(&a, &b, n)));
        }

        #[test]
        fn valuation_is_additive(
            a in proptest::collection::vec(-3i64..3, 1..12),
            b in proptest::collection::vec(-3i64..3, 1..12),
        ) {
            prop_assume!(ord(&a).is_some() && ord(&b).is_some());
            let prod = poly_q(&a).mul(&poly_q(&b)).unwrap().prefix(30).into_word();
            let got = prod.iter().position(|c| !c.is_zero());
            prop_assert_eq!(got, Some(ord(&a).unwrap() + ord(&b).unwrap()));
        }

        #[test]
        fn inverse_times_stream_is_one(a in proptest::collection::vec(-4i64..4, 1..10), a0 in 1i64..5) {
            let mut coeffs = a.clone();
            coeffs[0] = a0;
            let f = poly_q(&coeffs);
            let prod = f.mul(&f.inverse().unwrap()).unwrap().prefix(24);
            prop_assert_eq!(prod, Stream::one(&q()).unwrap().prefix(24));
        }

        #[test]
        fn memoization_is_transparent(order in proptest::collection::vec(0usize..40, 1..60)) {
            let make = || poly_q(&[1, -1, 2]).inverse().unwrap().mul(&naturals_from_one()).unwrap();
            let fresh = make().prefix(40);
            let probed = make();
            for k in order {
                prop_assert_eq!(&probed.coefficient_at(k), fresh.letter(k).unwrap());
            }
            prop_assert_eq!(probed.prefix(40), fresh);
        }
    }
}
