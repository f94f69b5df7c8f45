//! Stream arithmetic against independent recurrences.

use causal_streams::{Coeff, Domain, Stream};
use num::BigInt;
use proptest::prelude::*;

fn q() -> Domain {
    Domain::Rational
}

fn ints(s: &Stream, n: usize) -> Vec<String> {
    s.prefix(n).to_strings()
}

#[test]
fn catalan_by_feedback_matches_the_recurrence() {
    let d = q();
    let f = Stream::feedback(d.clone(), |f| {
        let x = Stream::x(&d)?;
        Stream::one(&d)?.add(&x.mul(f)?.mul(f)?)
    })
    .unwrap();
    let mut c: Vec<BigInt> = vec![BigInt::from(1)];
    for m in 1..40 {
        let next = (0..m).map(|i| &c[i] * &c[m - 1 - i]).sum();
        c.push(next);
    }
    let expected: Vec<String> = c.iter().map(BigInt::to_string).collect();
    assert_eq!(ints(&f, 40), expected);
}

#[test]
fn fibonacci_is_x_over_one_minus_x_minus_x_squared() {
    let d = q();
    let x = Stream::x(&d).unwrap();
    let denom = Stream::polynomial(&d, vec![Coeff::int(1), Coeff::int(-1), Coeff::int(-1)]).unwrap();
    let fib = x.mul(&denom.inverse().unwrap()).unwrap();
    let (mut a, mut b) = (BigInt::from(0), BigInt::from(1));
    let mut expected = Vec::new();
    for _ in 0..60 {
        expected.push(a.to_string());
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    assert_eq!(ints(&fib, 60), expected);
}

#[test]
fn gf2_series_have_characteristic_two() {
    let d = Domain::Gf2;
    let f = Stream::periodic(&d, vec![Coeff::bit(true), Coeff::bit(false), Coeff::bit(true)]).unwrap();
    assert!(f.add(&f).unwrap().prefix(30).word().iter().all(Coeff::is_zero));
    // (1 + X)^2 = 1 + X^2 over GF(2)
    let one_x = Stream::polynomial(&d, vec![Coeff::bit(true), Coeff::bit(true)]).unwrap();
    assert_eq!(one_x.mul(&one_x).unwrap().prefix(4).to_strings().concat(), "1010");
}

fn rat_series() -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-5i64..6, 1..8)
}

fn series(cs: &[i64]) -> Stream {
    Stream::polynomial(&q(), cs.iter().map(|&c| Coeff::int(c)).collect()).unwrap()
}

proptest! {
    #[test]
    fn inverse_is_multiplicative(a in rat_series(), b in rat_series(), a0 in 1i64..4, b0 in -3i64..-1) {
        let mut a = a; a[0] = a0;
        let mut b = b; b[0] = b0;
        let (f, g) = (series(&a), series(&b));
        let lhs = f.mul(&g).unwrap().inverse().unwrap();
        let rhs = f.inverse().unwrap().mul(&g.inverse().unwrap()).unwrap();
        prop_assert_eq!(lhs.prefix(16), rhs.prefix(16));
    }

    #[test]
    fn composition_is_associative(a in rat_series(), b in rat_series(), c in rat_series()) {
        let mut b = b; b[0] = 0;
        let mut c = c; c[0] = 0;
        let (f, g, h) = (series(&a), series(&b), series(&c));
        let left = Stream::fcompose(&Stream::fcompose(&f, &g).unwrap(), &h).unwrap();
        let right = Stream::fcompose(&f, &Stream::fcompose(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(left.prefix(12), right.prefix(12));
    }

    #[test]
    fn cons_then_tail_is_identity(a in rat_series(), head in -3i64..4) {
        let f = series(&a);
        let consed = Stream::cons(Coeff::int(head), &f).unwrap();
        prop_assert_eq!(consed.head(), Coeff::int(head));
        prop_assert_eq!(consed.tail().prefix(10), f.prefix(10));
    }
}
