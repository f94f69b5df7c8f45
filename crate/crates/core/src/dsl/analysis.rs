//! Static delay inference and the bounded semantic causality check.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ast::*;
use super::elaborate::{input_streams, Bindings};
use super::parser::const_literal;
use crate::coeff::{Coeff, Domain};
use crate::error::Result;
use crate::prefix::Prefix;
use crate::stream::Stream;
use crate::transformer::causality::random_word;
use crate::transformer::mix_eager;

/// Cap on the number of simple cycles listed in a report.
const MAX_CYCLES: usize = 256;

/// A reference to a declared stream inside a definition. Output index `k`
/// reads the referenced stream at indices `≤ k − delay` only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Occurrence {
    pub name: String,
    pub delay: usize,
    /// Inside a branch of a conditional.
    pub conditional: bool,
}

/// Lower bound on the order (index of the first nonzero coefficient);
/// `None` for an expression that is identically zero.
pub(crate) fn order_bound(e: &Expr) -> Option<usize> {
    let min = |a: Option<usize>, b: Option<usize>| match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) | (None, x) => x,
    };
    match &e.kind {
        ExprKind::Num(r) => (!num::Zero::is_zero(r)).then_some(0),
        ExprKind::Name(_) | ExprKind::Not(_) => Some(0),
        ExprKind::X => Some(1),
        ExprKind::Add(a, b) => min(order_bound(a), order_bound(b)),
        ExprKind::Mul(a, b) => Some(order_bound(a)? + order_bound(b)?),
        ExprKind::Scale(r, a) => {
            if num::Zero::is_zero(r) {
                None
            } else {
                order_bound(a)
            }
        }
        ExprKind::Cons(head, tail) => {
            if head.is_zero() {
                order_bound(tail).map(|v| v + 1)
            } else {
                Some(0)
            }
        }
        ExprKind::Ite(_, t, f) => min(order_bound(t), order_bound(f)),
        ExprKind::Call(name, args) => match name.as_str() {
            "delay" => order_bound(&args[0]).map(|v| v + 1),
            _ => Some(0),
        },
    }
}

pub(crate) fn occurrences(sys: &EqnSystem, body: &Body) -> Vec<Occurrence> {
    let mut out = Vec::new();
    match body {
        Body::Eq(e) => collect(sys, e, 0, false, &mut out),
        Body::In(SetExpr::Members(ms)) => ms.iter().for_each(|m| collect(sys, m, 0, false, &mut out)),
        Body::In(SetExpr::Mix(a, b)) => {
            collect(sys, a, 1, false, &mut out);
            collect(sys, b, 1, false, &mut out);
        }
    }
    out
}

fn collect(sys: &EqnSystem, e: &Expr, d: usize, cond: bool, out: &mut Vec<Occurrence>) {
    match &e.kind {
        ExprKind::Name(n) if sys.decl(n).is_some() => out.push(Occurrence {
            name: n.clone(),
            delay: d,
            conditional: cond,
        }),
        ExprKind::Num(_) | ExprKind::Name(_) | ExprKind::X => {}
        ExprKind::Add(a, b) => {
            collect(sys, a, d, cond, out);
            collect(sys, b, d, cond, out);
        }
        ExprKind::Mul(a, b) => {
            if let (Some(oa), Some(ob)) = (order_bound(a), order_bound(b)) {
                collect(sys, a, d + ob, cond, out);
                collect(sys, b, d + oa, cond, out);
            }
        }
        ExprKind::Scale(r, a) => {
            if !num::Zero::is_zero(r) {
                collect(sys, a, d, cond, out);
            }
        }
        ExprKind::Cons(_, a) => collect(sys, a, d + 1, cond, out),
        ExprKind::Ite(c, t, f) => {
            collect(sys, c, d, cond, out);
            collect(sys, t, d, true, out);
            collect(sys, f, d, true, out);
        }
        ExprKind::Not(a) => collect(sys, a, d, cond, out),
        ExprKind::Call(name, args) => {
            let extra = usize::from(name == "delay");
            let n = if name == "register" { 2 } else { args.len() };
            for a in &args[..n] {
                collect(sys, a, d + extra, cond, out);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dependency {
    pub from: String,
    pub to: String,
    /// Least delay over all references.
    pub delay: usize,
    /// Every reference attaining the least delay sits inside a conditional.
    pub conditional: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    /// Streams along the cycle; the last one depends on the first.
    pub streams: Vec<String>,
    pub delay: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StaticVerdict {
    /// Every dependency cycle has positive total delay.
    StronglyCausal,
    /// Zero-delay cycles exist, but each passes through a conditional.
    WeaklyCausalOnly,
    /// A cycle of unconditional zero-delay references.
    Rejected { cycle: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SemanticOutcome {
    /// Every defined coefficient up to the depth was resolved; the resolved
    /// prefixes are the unique solution on these inputs.
    Passed { values: Vec<(String, Prefix)> },
    Unresolved { stream: String, position: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputUse {
    pub name: String,
    pub prefix: Prefix,
    /// Drawn at random because the input had no binding.
    pub sampled: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemanticReport {
    pub depth: usize,
    pub inputs: Vec<InputUse>,
    pub outcome: SemanticOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    StronglyCausal { min_cycle_delay: Option<usize> },
    WeaklyCausalOnly,
    SemanticCheckPassed { depth: usize },
    Rejected { reason: String },
}

impl Verdict {
    pub fn is_rejected(&self) -> bool {
        matches!(self, Verdict::Rejected { .. })
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::StronglyCausal { .. } => "strongly-causal",
            Verdict::WeaklyCausalOnly => "weakly-causal-only",
            Verdict::SemanticCheckPassed { .. } => "semantic-check-passed",
            Verdict::Rejected { .. } => "rejected",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::StronglyCausal { min_cycle_delay: Some(d) } => write!(f, "strongly-causal (min cycle delay {d})"),
            Verdict::StronglyCausal { min_cycle_delay: None } => f.write_str("strongly-causal (acyclic)"),
            Verdict::WeaklyCausalOnly => f.write_str("weakly-causal-only"),
            Verdict::SemanticCheckPassed { depth } => write!(f, "semantic-check-passed({depth})"),
            Verdict::Rejected { reason } => write!(f, "rejected: {reason}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CausalityReport {
    pub dependencies: Vec<Dependency>,
    pub cycles: Vec<Cycle>,
    /// More simple cycles exist than were listed.
    pub cycles_truncated: bool,
    pub static_verdict: StaticVerdict,
    pub semantic: Option<SemanticReport>,
    pub verdict: Verdict,
}

/// Per-stream dependencies on other defined streams and inputs.
pub fn dependencies(sys: &EqnSystem) -> Vec<Dependency> {
    let mut deps = Vec::new();
    for def in &sys.defns {
        let mut best: BTreeMap<&str, (usize, bool)> = BTreeMap::new();
        let occ = occurrences(sys, &def.body);
        for o in &occ {
            let entry = best.entry(&o.name).or_insert((usize::MAX, true));
            if o.delay < entry.0 {
                *entry = (o.delay, o.conditional);
            } else if o.delay == entry.0 {
                entry.1 &= o.conditional;
            }
        }
        for (to, (delay, conditional)) in best {
            deps.push(Dependency {
                from: def.name.clone(),
                to: to.to_string(),
                delay,
                conditional,
            });
        }
    }
    deps
}

struct Graph {
    names: Vec<String>,
    /// `edges[i]` lists `(j, delay, unconditional_zero)`.
    edges: Vec<Vec<(usize, usize, bool)>>,
}

impl Graph {
    fn new(sys: &EqnSystem, deps: &[Dependency]) -> Graph {
        let names: Vec<String> = sys.defined().iter().map(|d| d.name.clone()).collect();
        let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let mut edges = vec![Vec::new(); names.len()];
        for def in &sys.defns {
            let i = index[def.name.as_str()];
            let occ = occurrences(sys, &def.body);
            for d in deps.iter().filter(|d| d.from == def.name) {
                if let Some(&j) = index.get(d.to.as_str()) {
                    let hard_zero = occ.iter().any(|o| o.name == d.to && o.delay == 0 && !o.conditional);
                    edges[i].push((j, d.delay, hard_zero));
                }
            }
        }
        Graph { names, edges }
    }

    /// A cycle using only edges accepted by `keep`, if any.
    fn find_cycle(&self, keep: impl Fn(usize, bool) -> bool) -> Option<Vec<String>> {
        let n = self.names.len();
        let mut state = vec![0u8; n];
        let mut stack = Vec::new();
        fn visit(
            g: &Graph,
            v: usize,
            keep: &dyn Fn(usize, bool) -> bool,
            state: &mut [u8],
            stack: &mut Vec<usize>,
        ) -> Option<Vec<usize>> {
            state[v] = 1;
            stack.push(v);
            for &(w, d, hard) in &g.edges[v] {
                if !keep(d, hard) {
                    continue;
                }
                if state[w] == 1 {
                    let at = stack.iter().position(|&x| x == w).unwrap();
                    return Some(stack[at..].to_vec());
                }
                if state[w] == 0 {
                    if let Some(c) = visit(g, w, keep, state, stack) {
                        return Some(c);
                    }
                }
            }
            stack.pop();
            state[v] = 2;
            None
        }
        (0..n).find_map(|v| {
            if state[v] == 0 {
                visit(self, v, &keep, &mut state, &mut stack)
            } else {
                None
            }
        })
        .map(|c| c.into_iter().map(|i| self.names[i].clone()).collect())
    }

    /// Simple cycles, each listed once from its smallest member.
    fn cycles(&self) -> (Vec<Cycle>, bool) {
        let mut out = Vec::new();
        let mut truncated = false;
        for start in 0..self.names.len() {
            let mut path = vec![start];
            let mut on_path = vec![false; self.names.len()];
            on_path[start] = true;
            self.extend(start, &mut path, &mut on_path, 0, &mut out, &mut truncated);
        }
        (out, truncated)
    }

    fn extend(
        &self,
        start: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        delay: usize,
        out: &mut Vec<Cycle>,
        truncated: &mut bool,
    ) {
        let v = *path.last().unwrap();
        for &(w, d, _) in &self.edges[v] {
            if w == start {
                if out.len() >= MAX_CYCLES {
                    *truncated = true;
                    return;
                }
                out.push(Cycle {
                    streams: path.iter().map(|&i| self.names[i].clone()).collect(),
                    delay: delay + d,
                });
            } else if w > start && !on_path[w] {
                on_path[w] = true;
                path.push(w);
                self.extend(start, path, on_path, delay + d, out, truncated);
                path.pop();
                on_path[w] = false;
            }
        }
    }
}

/// Static causality analysis, optionally followed by the bounded semantic
/// check on the given inputs (unbound inputs are sampled from `seed`).
pub fn analyze_causality(
    sys: &EqnSystem,
    semantic_depth: Option<usize>,
    bindings: &Bindings,
    seed: u64,
) -> Result<CausalityReport> {
    let dependencies = dependencies(sys);
    let graph = Graph::new(sys, &dependencies);
    let (cycles, cycles_truncated) = graph.cycles();
    let static_verdict = if let Some(cycle) = graph.find_cycle(|d, hard| d == 0 && hard) {
        StaticVerdict::Rejected { cycle }
    } else if graph.find_cycle(|d, _| d == 0).is_some() {
        StaticVerdict::WeaklyCausalOnly
    } else {
        StaticVerdict::StronglyCausal
    };
    let semantic = match (semantic_depth, &static_verdict) {
        (Some(depth), v) if *v != StaticVerdict::StronglyCausal => Some(semantic_check(sys, bindings, depth, seed)?),
        _ => None,
    };
    let verdict = match (&static_verdict, &semantic) {
        (StaticVerdict::StronglyCausal, _) => Verdict::StronglyCausal {
            min_cycle_delay: cycles.iter().map(|c| c.delay).min(),
        },
        (StaticVerdict::Rejected { cycle }, sem) => {
            let mut reason = format!("zero-delay cycle {}", cycle.join(" -> "));
            if let Some(SemanticReport {
                outcome: SemanticOutcome::Unresolved { stream, position },
                ..
            }) = sem
            {
                reason.push_str(&format!("; `{stream}` unresolvable at position {position}"));
            }
            Verdict::Rejected { reason }
        }
        (StaticVerdict::WeaklyCausalOnly, None) => Verdict::WeaklyCausalOnly,
        (StaticVerdict::WeaklyCausalOnly, Some(sem)) => match &sem.outcome {
            SemanticOutcome::Passed { .. } => Verdict::SemanticCheckPassed { depth: sem.depth },
            SemanticOutcome::Unresolved { stream, position } => Verdict::Rejected {
                reason: format!("`{stream}` unresolvable at position {position}"),
            },
        },
    };
    Ok(CausalityReport {
        dependencies,
        cycles,
        cycles_truncated,
        static_verdict,
        semantic,
        verdict,
    })
}

struct Tick<'a> {
    sys: &'a EqnSystem,
    inputs: &'a HashMap<String, Stream>,
    values: HashMap<String, Vec<Coeff>>,
}

impl Tick<'_> {
    /// Three-valued evaluation of coefficient `k`: `None` when it depends on
    /// a coefficient not yet resolved.
    fn eval(&self, e: &Expr, dom: &Domain, k: usize) -> Option<Coeff> {
        let zero = || dom.zero();
        match &e.kind {
            ExprKind::Num(r) => {
                if k == 0 {
                    Literal::Num(r.clone()).to_coeff(dom)
                } else {
                    zero()
                }
            }
            ExprKind::Name(n) => {
                if let Some(s) = self.inputs.get(n) {
                    Some(s.coefficient_at(k))
                } else if let Some(v) = self.values.get(n) {
                    v.get(k).cloned()
                } else {
                    Literal::Sym(n.clone()).to_coeff(dom)
                }
            }
            ExprKind::X => if k == 1 { dom.one() } else { zero() },
            ExprKind::Add(a, b) => self.eval(a, dom, k)?.add(&self.eval(b, dom, k)?).ok(),
            ExprKind::Mul(a, b) => {
                let mut acc = zero()?;
                for i in 0..=k {
                    let x = self.eval(a, dom, i);
                    let y = self.eval(b, dom, k - i);
                    match (x, y) {
                        (Some(x), _) if x.is_zero() => {}
                        (_, Some(y)) if y.is_zero() => {}
                        (Some(x), Some(y)) => acc = acc.add(&x.mul(&y).ok()?).ok()?,
                        _ => return None,
                    }
                }
                Some(acc)
            }
            ExprKind::Scale(r, a) => {
                let r = Literal::Num(r.clone()).to_coeff(dom)?;
                if r.is_zero() {
                    return zero();
                }
                r.mul(&self.eval(a, dom, k)?).ok()
            }
            ExprKind::Cons(head, tail) => {
                if k == 0 {
                    head.to_coeff(dom)
                } else {
                    self.eval(tail, dom, k - 1)
                }
            }
            ExprKind::Ite(c, t, f) => match self.eval(c, &Domain::Gf2, k) {
                Some(Coeff::Bit(true)) => self.eval(t, dom, k),
                Some(_) => self.eval(f, dom, k),
                None => {
                    let (x, y) = (self.eval(t, dom, k)?, self.eval(f, dom, k)?);
                    (x == y).then_some(x)
                }
            },
            ExprKind::Not(a) => match self.eval(a, dom, k)? {
                Coeff::Bit(b) => Some(Coeff::Bit(!b)),
                _ => None,
            },
            ExprKind::Call(name, args) => match name.as_str() {
                "delay" => {
                    if k == 0 {
                        Some(dom.default_letter())
                    } else {
                        self.eval(&args[0], dom, k - 1)
                    }
                }
                "succ" => {
                    let v = self.eval(&args[0], dom, k)?;
                    if k == 0 {
                        v.add(&dom.one()?).ok()
                    } else {
                        Some(v)
                    }
                }
                "register" => self.register(&args[0], &args[1], &args[2], dom, k),
                _ => None,
            },
        }
    }

    fn register(&self, v: &Expr, en: &Expr, init: &Expr, dom: &Domain, k: usize) -> Option<Coeff> {
        let before = || {
            if k == 0 {
                const_literal(init)?.to_coeff(dom)
            } else {
                self.register(v, en, init, dom, k - 1)
            }
        };
        match self.eval(en, &Domain::Gf2, k) {
            Some(Coeff::Bit(true)) => self.eval(v, dom, k),
            Some(_) => before(),
            None => {
                let (x, y) = (self.eval(v, dom, k)?, before()?);
                (x == y).then_some(x)
            }
        }
    }

    fn eval_body(&self, body: &Body, dom: &Domain, k: usize) -> Option<Coeff> {
        match body {
            Body::Eq(e) => self.eval(e, dom, k),
            Body::In(SetExpr::Members(ms)) => self.eval(&ms[0], dom, k),
            Body::In(SetExpr::Mix(a, b)) => {
                let word = |e: &Expr| -> Option<Prefix> {
                    let w = (0..k).map(|i| self.eval(e, dom, i)).collect::<Option<Vec<_>>>()?;
                    Some(Prefix::new_unchecked(dom.clone(), w))
                };
                mix_eager(&word(a)?, &word(b)?).letter(k).cloned()
            }
        }
    }
}

/// Resolves the defined coefficients position by position on concrete
/// inputs, the way a synchronous program would execute. Within a position,
/// streams are evaluated repeatedly until no further one resolves;
/// conditionals with a known guard read only the selected branch.
/// Inclusions follow their first member.
pub fn semantic_check(sys: &EqnSystem, bindings: &Bindings, depth: usize, seed: u64) -> Result<SemanticReport> {
    let mut bound = input_streams(sys, bindings)?;
    let mut inputs = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for decl in sys.inputs() {
        let sampled = !bound.contains_key(&decl.name);
        if sampled {
            let w = random_word(&decl.domain, depth, &mut rng);
            bound.insert(decl.name.clone(), Stream::from_prefix(&w));
        }
        inputs.push(InputUse {
            name: decl.name.clone(),
            prefix: bound[&decl.name].prefix(depth),
            sampled,
        });
    }
    let inputs_map: HashMap<String, Stream> = bound.into_iter().collect();
    let defined = sys.defined();
    let mut tick = Tick {
        sys,
        inputs: &inputs_map,
        values: defined.iter().map(|d| (d.name.clone(), Vec::new())).collect(),
    };
    for k in 0..depth {
        let mut open: BTreeSet<usize> = (0..defined.len()).collect();
        loop {
            let mut resolved = Vec::new();
            for &i in &open {
                let d = defined[i];
                let body = &tick.sys.defn(&d.name).expect("validated").body;
                if let Some(c) = tick.eval_body(body, &d.domain, k) {
                    resolved.push((i, c));
                }
            }
            if resolved.is_empty() {
                break;
            }
            for (i, c) in resolved {
                tick.values.get_mut(&defined[i].name).unwrap().push(c);
                open.remove(&i);
            }
        }
        if let Some(&i) = open.first() {
            return Ok(SemanticReport {
                depth,
                inputs,
                outcome: SemanticOutcome::Unresolved {
                    stream: defined[i].name.clone(),
                    position: k,
                },
            });
        }
    }
    let values = defined
        .iter()
        .map(|d| {
            let w = tick.values.remove(&d.name).unwrap();
            (d.name.clone(), Prefix::new_unchecked(d.domain.clone(), w))
        })
        .collect();
    Ok(SemanticReport {
        depth,
        inputs,
        outcome: SemanticOutcome::Passed { values },
    })
}
