//! Elaboration of an equation system into one transformer on the tuple of
//! its defined streams.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use super::analysis::{analyze_causality, occurrences, StaticVerdict};
use super::ast::*;
use super::parser::const_literal;
use crate::coeff::{Coeff, Domain};
use crate::error::{Error, Result};
use crate::prefix::{Prefix, PrefixSet};
use crate::stream::Stream;
use crate::transformer::{mix_eager, Delay, DetTransformer, NDetTransformer, Transformer};

/// Concrete streams for input names.
pub type Bindings = BTreeMap<String, Stream>;

pub fn spec_stream(spec: &InputSpec, domain: &Domain) -> Result<Stream> {
    let coeff = |l: &Literal| {
        l.to_coeff(domain).ok_or_else(|| Error::MalformedCoeff {
            text: super::parser::render_literal(l),
            domain: domain.to_string(),
        })
    };
    let all = |ls: &[Literal]| ls.iter().map(coeff).collect::<Result<Vec<_>>>();
    match spec {
        InputSpec::Poly(ls) => Stream::polynomial(domain, all(ls)?),
        InputSpec::Cycle(ls) => Stream::periodic(domain, all(ls)?),
        InputSpec::Ramp(a, b) => Stream::ramp(domain, coeff(a)?, coeff(b)?),
        InputSpec::Const(a) => Stream::periodic(domain, vec![coeff(a)?]),
    }
}

/// Input streams from the source bindings, with `overrides` taking
/// precedence. Inputs bound nowhere are absent from the result.
pub fn input_streams(sys: &EqnSystem, overrides: &Bindings) -> Result<Bindings> {
    let mut out = Bindings::new();
    for (name, s) in overrides {
        let decl = sys.decl(name).filter(|d| d.role != Role::Defined).ok_or_else(|| Error::BadParams {
            name: name.clone(),
            reason: "not an input stream of the system".into(),
        })?;
        if s.domain() != &decl.domain {
            return Err(Error::mismatch(&decl.domain, s.domain()));
        }
        out.insert(name.clone(), s.clone());
    }
    for d in sys.inputs() {
        if let (Role::Input(Some(spec)), false) = (&d.role, out.contains_key(&d.name)) {
            out.insert(d.name.clone(), spec_stream(spec, &d.domain)?);
        }
    }
    Ok(out)
}

/// The transformer of a system together with the naming of its components.
#[derive(Clone)]
pub struct Elaborated {
    pub transformer: Transformer,
    /// Defined streams in tuple order.
    pub streams: Vec<String>,
    /// Defined streams no other definition refers to; all of them if every
    /// stream is referenced.
    pub outputs: Vec<String>,
    /// The order in which the word function computes the streams.
    pub order: Vec<String>,
}

impl Elaborated {
    /// The component of a tuple prefix belonging to `name`.
    pub fn project(&self, p: &Prefix, name: &str) -> Option<Prefix> {
        let i = self.streams.iter().position(|s| s == name)?;
        if self.streams.len() == 1 {
            Some(p.clone())
        } else {
            p.unzip().into_iter().nth(i)
        }
    }

    pub fn split(&self, p: &Prefix) -> Vec<(String, Prefix)> {
        self.streams
            .iter()
            .map(|s| (s.clone(), self.project(p, s).expect("own stream")))
            .collect()
    }
}

struct Plan {
    sys: EqnSystem,
    defined: Vec<(String, Domain)>,
    /// Indices into `defined`, in evaluation order.
    order: Vec<usize>,
    /// References to streams computed earlier read the fresh values.
    substitute: bool,
    inputs: HashMap<String, Stream>,
    delay: usize,
    domain: Domain,
}

type Env = HashMap<String, Stream>;

impl Plan {
    fn lookup(&self, name: &str, fed: &Env, computed: &Env) -> Option<Stream> {
        if self.substitute {
            if let Some(s) = computed.get(name) {
                return Some(s.clone());
            }
        }
        fed.get(name).or_else(|| self.inputs.get(name)).cloned()
    }

    fn build(&self, e: &Expr, dom: &Domain, fed: &Env, computed: &Env) -> Result<Stream> {
        let sub = |e: &Expr, dom: &Domain| self.build(e, dom, fed, computed);
        let lit = |l: &Literal| l.to_coeff(dom).ok_or_else(|| Error::mismatch(dom, "literal"));
        match &e.kind {
            ExprKind::Num(r) => Stream::scalar_const(dom, lit(&Literal::Num(r.clone()))?),
            ExprKind::Name(n) => match self.lookup(n, fed, computed) {
                Some(s) => Ok(s),
                None => Stream::periodic(dom, vec![lit(&Literal::Sym(n.clone()))?]),
            },
            ExprKind::X => Stream::x(dom),
            ExprKind::Add(a, b) => sub(a, dom)?.add(&sub(b, dom)?),
            ExprKind::Mul(a, b) => sub(a, dom)?.mul(&sub(b, dom)?),
            ExprKind::Scale(r, a) => sub(a, dom)?.scalar(&lit(&Literal::Num(r.clone()))?),
            ExprKind::Cons(head, tail) => Stream::cons(lit(head)?, &sub(tail, dom)?),
            ExprKind::Ite(c, t, f) => {
                let (c, t, f) = (sub(c, &Domain::Gf2)?, sub(t, dom)?, sub(f, dom)?);
                Ok(Stream::from_fn(dom.clone(), move |k| {
                    if c.coefficient_at(k) == Coeff::Bit(true) {
                        t.coefficient_at(k)
                    } else {
                        f.coefficient_at(k)
                    }
                }))
            }
            ExprKind::Not(a) => Ok(sub(a, dom)?.map(Domain::Gf2, |c| Coeff::Bit(c != &Coeff::Bit(true)))),
            ExprKind::Call(name, args) => match name.as_str() {
                "delay" => Stream::cons(dom.default_letter(), &sub(&args[0], dom)?),
                "succ" => {
                    let a = sub(&args[0], dom)?;
                    let one = dom.one().ok_or_else(|| Error::mismatch("a field", dom))?;
                    Ok(Stream::from_fn(dom.clone(), move |k| {
                        let c = a.coefficient_at(k);
                        if k == 0 {
                            c.add(&one).expect("field")
                        } else {
                            c
                        }
                    }))
                }
                "register" => {
                    let (v, en) = (sub(&args[0], dom)?, sub(&args[1], &Domain::Gf2)?);
                    let init = const_literal(&args[2]).as_ref().map(lit).ok_or_else(|| Error::BadParams {
                        name: "register".into(),
                        reason: "initial value must be a literal".into(),
                    })??;
                    Ok(Stream::recursive(dom.clone(), move |me, k| {
                        if en.coefficient_at(k) == Coeff::Bit(true) {
                            v.coefficient_at(k)
                        } else if k == 0 {
                            init.clone()
                        } else {
                            me.coefficient_at(k - 1)
                        }
                    }))
                }
                other => Err(Error::UnknownBuiltin(other.to_string())),
            },
        }
    }

    fn fed(&self, p: &Prefix) -> Env {
        let parts = if self.defined.len() == 1 { vec![p.clone()] } else { p.unzip() };
        self.defined
            .iter()
            .zip(parts)
            .map(|((n, _), w)| (n.clone(), Stream::from_prefix(&w)))
            .collect()
    }

    fn output(&self, computed: &Env, len: usize) -> Prefix {
        let parts: Vec<Prefix> = self.defined.iter().map(|(n, _)| computed[n].prefix(len)).collect();
        if parts.len() == 1 {
            parts.into_iter().next().unwrap()
        } else {
            Prefix::zip(&parts).expect("uniform length")
        }
    }

    fn det(&self, p: &Prefix) -> Result<Prefix> {
        let fed = self.fed(p);
        let mut computed = Env::new();
        for &i in &self.order {
            let (name, dom) = &self.defined[i];
            let Body::Eq(e) = &self.sys.defn(name).expect("validated").body else {
                unreachable!("deterministic plan");
            };
            let s = self.build(e, dom, &fed, &computed)?;
            computed.insert(name.clone(), s);
        }
        Ok(self.output(&computed, p.len() + self.delay))
    }

    fn ndet(&self, p: &Prefix) -> Result<PrefixSet> {
        let len = p.len() + self.delay;
        let mut out = PrefixSet::empty(self.domain.clone(), len);
        self.branch(0, &self.fed(p), &mut Env::new(), len, &mut out)?;
        Ok(out)
    }

    fn branch(&self, step: usize, fed: &Env, computed: &mut Env, len: usize, out: &mut PrefixSet) -> Result<()> {
        let Some(&i) = self.order.get(step) else {
            out.insert(self.output(computed, len))?;
            return Ok(());
        };
        let (name, dom) = &self.defined[i];
        let choices: Vec<Stream> = match &self.sys.defn(name).expect("validated").body {
            Body::Eq(e) => vec![self.build(e, dom, fed, computed)?],
            Body::In(SetExpr::Members(ms)) => ms
                .iter()
                .map(|m| self.build(m, dom, fed, computed))
                .collect::<Result<_>>()?,
            Body::In(SetExpr::Mix(a, b)) => {
                if len == 0 {
                    vec![Stream::from_prefix(&Prefix::empty(dom.clone()))]
                } else {
                    let a = self.build(a, dom, fed, computed)?.prefix(len - 1);
                    let b = self.build(b, dom, fed, computed)?.prefix(len - 1);
                    crate::transformer::mix_image(&mix_eager(&a, &b))
                        .iter()
                        .map(Stream::from_prefix)
                        .collect()
                }
            }
        };
        for s in choices {
            computed.insert(name.clone(), s);
            self.branch(step + 1, fed, computed, len, out)?;
        }
        computed.remove(name);
        Ok(())
    }
}

fn outputs(sys: &EqnSystem) -> Vec<String> {
    let defined: Vec<String> = sys.defined().iter().map(|d| d.name.clone()).collect();
    let referenced: BTreeSet<String> = sys
        .defns
        .iter()
        .flat_map(|d| occurrences(sys, &d.body).into_iter().filter(move |o| o.name != d.name))
        .map(|o| o.name)
        .collect();
    let free: Vec<String> = defined.iter().filter(|n| !referenced.contains(*n)).cloned().collect();
    if free.is_empty() {
        defined
    } else {
        free
    }
}

/// Evaluation order in which every zero-delay reference points backwards,
/// ties broken by declaration order.
fn zero_delay_order(sys: &EqnSystem, names: &[String]) -> Option<Vec<usize>> {
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let mut needs: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); names.len()];
    for (i, n) in names.iter().enumerate() {
        for o in occurrences(sys, &sys.defn(n)?.body) {
            if let (0, Some(&j)) = (o.delay, index.get(o.name.as_str())) {
                needs[i].insert(j);
            }
        }
    }
    let mut order = Vec::new();
    let mut placed = vec![false; names.len()];
    while order.len() < names.len() {
        let next = (0..names.len()).find(|&i| !placed[i] && needs[i].iter().all(|&j| placed[j]))?;
        placed[next] = true;
        order.push(next);
    }
    Some(order)
}

fn plan(sys: &EqnSystem, bindings: &Bindings, substitute: bool) -> Result<Plan> {
    let inputs = input_streams(sys, bindings)?;
    for d in sys.inputs() {
        if !inputs.contains_key(&d.name) {
            return Err(Error::BadParams {
                name: d.name.clone(),
                reason: "input stream has no binding".into(),
            });
        }
    }
    let defined: Vec<(String, Domain)> = sys.defined().iter().map(|d| (d.name.clone(), d.domain.clone())).collect();
    let names: Vec<String> = defined.iter().map(|(n, _)| n.clone()).collect();
    let domain = Domain::product(defined.iter().map(|(_, d)| d.clone()).collect());
    let (order, delay) = if substitute {
        let order = zero_delay_order(sys, &names)
            .ok_or_else(|| Error::Rejected("zero-delay dependency cycle".into()))?;
        let mut eff: Vec<Option<usize>> = vec![None; names.len()];
        let mut position = vec![0; names.len()];
        for (pos, &i) in order.iter().enumerate() {
            position[i] = pos;
        }
        for &i in &order {
            let occ = occurrences(sys, &sys.defn(&names[i]).expect("validated").body);
            eff[i] = occ
                .iter()
                .filter_map(|o| {
                    let j = names.iter().position(|n| *n == o.name)?;
                    if position[j] < position[i] {
                        eff[j].map(|e| e + o.delay)
                    } else {
                        Some(o.delay)
                    }
                })
                .min();
        }
        let delay = eff.iter().flatten().min().copied().unwrap_or(1);
        if delay == 0 {
            return Err(Error::Rejected("zero-delay dependency cycle".into()));
        }
        (order, delay)
    } else {
        ((0..names.len()).collect(), 0)
    };
    Ok(Plan {
        sys: sys.clone(),
        defined,
        order,
        substitute,
        inputs: inputs.into_iter().collect(),
        delay,
        domain,
    })
}

fn finish(sys: &EqnSystem, plan: Plan, name: &str) -> Elaborated {
    let streams: Vec<String> = plan.defined.iter().map(|(n, _)| n.clone()).collect();
    let order = plan.order.iter().map(|&i| streams[i].clone()).collect();
    let (domain, delay) = (plan.domain.clone(), Delay(plan.delay));
    let transformer = if sys.is_deterministic() {
        let plan = Arc::new(plan);
        DetTransformer::new(name, domain.clone(), domain, delay, move |p| {
            plan.det(p).expect("validated system")
        })
        .into()
    } else {
        let branching = sys
            .defns
            .iter()
            .map(|d| match &d.body {
                Body::Eq(_) => 1,
                Body::In(s) => s.branching(),
            })
            .product();
        let plan = Arc::new(plan);
        NDetTransformer::new(name, domain.clone(), domain, delay, branching, move |p| {
            plan.ndet(p).expect("validated system")
        })
        .into()
    };
    Elaborated {
        transformer,
        streams,
        outputs: outputs(sys),
        order,
    }
}

/// The transformer whose fixpoints (or inclusion solutions) are exactly the
/// solutions of a strongly causal system.
///
/// Streams are computed in an order where zero-delay references point to
/// streams already computed, which are read directly; every other reference
/// reads the transformer's input. The declared delay is the least total
/// delay from an input read to an output coefficient, at least 1.
pub fn elaborate(sys: &EqnSystem, bindings: &Bindings) -> Result<Elaborated> {
    let report = analyze_causality(sys, None, bindings, 0)?;
    if report.static_verdict != StaticVerdict::StronglyCausal {
        return Err(Error::Rejected(format!(
            "system is not strongly causal: {}",
            report.verdict
        )));
    }
    let plan = plan(sys, bindings, true)?;
    Ok(finish(sys, plan, "system"))
}

/// The plain vector map of the system, reading every reference from the
/// input. It is only weakly causal in general; its fixpoints are the
/// system's solutions regardless of the causality verdict.
pub fn elaborate_naive(sys: &EqnSystem, bindings: &Bindings) -> Result<Elaborated> {
    let plan = plan(sys, bindings, false)?;
    Ok(finish(sys, plan, "system0"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;
    use crate::solver::solve_det;

    const FIG1: &str = "stream z : rat input; stream h1 : rat; stream h2 : rat; stream h3 : rat; stream y : rat;
        h1 = X*h2; h3 = z + h1; h2 = h3; y = h3;";

    fn with_z(spec: &str) -> Bindings {
        let spec = crate::dsl::parse_input_spec(spec).unwrap();
        Bindings::from([("z".to_string(), spec_stream(&spec, &Domain::Rational).unwrap())])
    }

    #[test]
    fn fig1_sums_its_input() {
        let sys = parse(FIG1).unwrap();
        let e = elaborate(&sys, &with_z("poly(1)")).unwrap();
        assert_eq!(e.transformer.delay(), Delay(1));
        assert_eq!(e.outputs, ["y"]);
        let fix = solve_det(e.transformer.as_det().unwrap(), 5).unwrap().prefixes.remove(0);
        assert_eq!(e.project(&fix, "y").unwrap().to_strings(), ["1"; 5]);

        let e = elaborate(&sys, &with_z("ramp(1, 1)")).unwrap();
        let fix = solve_det(e.transformer.as_det().unwrap(), 5).unwrap().prefixes.remove(0);
        assert_eq!(e.project(&fix, "y").unwrap().to_strings(), ["1", "3", "6", "10", "15"]);
    }

    #[test]
    fn unbound_inputs_are_errors() {
        let sys = parse(FIG1).unwrap();
        assert!(matches!(elaborate(&sys, &Bindings::new()), Err(Error::BadParams { .. })));
    }

    #[test]
    fn inclusion_elaborates_to_branching_two() {
        let sys = parse("stream f : bool; f in {X*f, 1 + X*f};").unwrap();
        let e = elaborate(&sys, &Bindings::new()).unwrap();
        let t = &e.transformer;
        assert!(!t.is_deterministic());
        assert_eq!((t.delay(), t.branching()), (Delay(1), 2));
        let img = t.apply(&Prefix::parse(&Domain::Gf2, &["1"]).unwrap()).unwrap();
        let words: Vec<String> = img.iter().map(|p| p.to_strings().concat()).collect();
        assert_eq!(words, ["01", "11"]);
    }

    #[test]
    fn weak_systems_are_not_elaborated_strictly() {
        let sys = parse("stream f : rat; f = f + 1;").unwrap();
        assert!(matches!(elaborate(&sys, &Bindings::new()), Err(Error::Rejected(_))));
        let e = elaborate_naive(&sys, &Bindings::new()).unwrap();
        assert_eq!(e.transformer.delay(), Delay(0));
        let out = e.transformer.as_det().unwrap().apply(&Prefix::parse(&Domain::Rational, &["3", "4"]).unwrap()).unwrap();
        assert_eq!(out.to_strings(), ["4", "4"]);
    }
}
