//! Results must not depend on whether work is spread over threads.

mod common;

use causal_streams::dsl;
use causal_streams::solver::{solve_inclusion, Strategy};
use causal_streams::transformer::{check_causality, compose, refines, succ, unit_delay, Combinator};
use causal_streams::{Delay, Domain, Parallelism, Transformer};

use common::table_transformer;

const MODES: [Parallelism; 2] = [Parallelism::Sequential, Parallelism::Parallel];

#[test]
fn causality_verdicts_agree() {
    let d1: Transformer = unit_delay(&Domain::Rational).unwrap().into();
    let s: Transformer = succ(&Domain::Rational).unwrap().into();
    for (t, claim) in [(d1.clone(), Delay(1)), (d1, Delay(2)), (s, Delay(1))] {
        let [a, b] = MODES.map(|m| check_causality(&t, claim, 16, 300, 42, m).unwrap());
        assert_eq!(a, b, "{} at {claim}", t.name());
    }
}

#[test]
fn exhaustive_solutions_agree() {
    let sys = dsl::parse("stream f : bool; stream g : bool; f in {X*g, 1 + X*g}; g in {X*f, X*X*f};").unwrap();
    let t = dsl::elaborate(&sys, &dsl::Bindings::new()).unwrap().transformer;
    let budget = Strategy::Exhaustive { budget: 1 << 20 };
    let [a, b] = MODES.map(|m| solve_inclusion(&t, 10, budget, m).unwrap());
    assert_eq!(a.prefixes, b.prefixes);
    assert!(!a.prefixes.is_empty());
}

#[test]
fn refinement_agrees() {
    let s = table_transformer(3, 1, false);
    let t = table_transformer(4, 1, false);
    let both = compose(Combinator::Angelic, &s, &t).unwrap();
    for (x, y) in [(&s, &both), (&both, &s)] {
        let [a, b] = MODES.map(|m| refines(x, y, 6, m).unwrap());
        assert_eq!(a, b);
    }
}
