use std::fs;
use std::path::Path;

use causal_streams::dsl::{
    self, Bindings, Diagnostic, Elaborated, EqnSystem, Role, SemanticOutcome, StaticVerdict,
};
use causal_streams::metric::{word_distance, Dyadic};
use causal_streams::solver::{self, Diagnosis, SolveResult, Strategy};
use causal_streams::{io, Domain, Error, Parallelism, Prefix, PrefixSet, Transformer};
use serde_json::Value;

use crate::report::{self, Solved};
use crate::{Command, Common, StrategyArg, BUDGET_ENV};

pub const EXIT_REJECTED: u8 = 1;
pub const EXIT_NO_SOLUTION: u8 = 2;
pub const EXIT_USAGE: u8 = 3;

/// Samples per ball when diagnosing a system without a unique solution.
const DIAGNOSIS_SAMPLES: usize = 64;

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{path}:{diag}")]
    Parse { path: String, diag: Diagnostic },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] Error),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Parse { .. } | Failure::Usage(_) => EXIT_USAGE,
            Failure::Core(e) => match e {
                Error::Rejected(_) | Error::NotStronglyCausal { .. } => EXIT_REJECTED,
                Error::NoSolution { .. } | Error::BudgetExhausted { .. } | Error::EmptyImage { .. } => {
                    EXIT_NO_SOLUTION
                }
                _ => EXIT_USAGE,
            },
        }
    }
}

type Outcome<T> = Result<T, Failure>;

struct Loaded {
    sys: EqnSystem,
    bindings: Bindings,
}

fn read(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn read_json(path: &Path) -> Outcome<Value> {
    io::parse_json(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(file: &Path, common: &Common) -> Outcome<Loaded> {
    let src = read(file)?;
    let sys = dsl::parse(&src).map_err(|diag| Failure::Parse {
        path: file.display().to_string(),
        diag,
    })?;
    let mut given = Bindings::new();
    for binding in &common.inputs {
        let (name, spec) = binding
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("--input expects NAME=SPEC, got `{binding}`")))?;
        let name = name.trim();
        let decl = sys
            .decl(name)
            .filter(|d| matches!(d.role, Role::Input(_)))
            .ok_or_else(|| Failure::Usage(format!("`{name}` is not an input stream of {}", file.display())))?;
        let spec = dsl::parse_input_spec(spec).map_err(|diag| Failure::Parse {
            path: format!("--input {name}"),
            diag,
        })?;
        given.insert(name.to_string(), dsl::spec_stream(&spec, &decl.domain)?);
    }
    let bindings = dsl::input_streams(&sys, &given)?;
    Ok(Loaded { sys, bindings })
}

fn require_bound(l: &Loaded) -> Outcome<()> {
    match l.sys.inputs().into_iter().find(|d| !l.bindings.contains_key(&d.name)) {
        Some(d) => Err(Failure::Usage(format!(
            "input `{}` has no binding; give it in the source or with --input {}=SPEC",
            d.name, d.name
        ))),
        None => Ok(()),
    }
}

/// Node budget: the flag, else the environment, else the library default.
fn budget(flag: Option<usize>) -> Outcome<usize> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{BUDGET_ENV} must be a node count, got `{v}`"))),
        Err(_) => Ok(solver::DEFAULT_BUDGET),
    }
}

fn strategy(arg: StrategyArg, seed: u64, budget: usize) -> Strategy {
    match arg {
        StrategyArg::First => Strategy::First,
        StrategyArg::Random => Strategy::Random { seed },
        StrategyArg::Exhaustive => Strategy::Exhaustive { budget },
    }
}

fn diagnosis_note(d: &Diagnosis) -> String {
    match d {
        Diagnosis::FixpointPrefixFound { prefix, depth } => format!(
            "consistent prefixes exist to depth {depth}, e.g. {}",
            prefix.to_strings().join(" ")
        ),
        Diagnosis::InvariantDistanceWitness { deepest, radius, ball, samples } => format!(
            "no fixpoint: no consistent prefix longer than {deepest}; d(u, T(u)) = {radius} for all {samples} \
             sampled u in the ball around [{}]",
            ball.center().to_strings().join(" ")
        ),
        Diagnosis::Inconclusive { deepest } => {
            format!("inconclusive: consistent prefixes reach length {deepest}")
        }
    }
}

fn tuple_of(e: &Elaborated, values: &[(String, Prefix)]) -> Outcome<Prefix> {
    let parts = e
        .streams
        .iter()
        .map(|s| {
            values
                .iter()
                .find(|(n, _)| n == s)
                .map(|(_, p)| p.clone())
                .ok_or_else(|| Failure::Usage(format!("no value for `{s}`")))
        })
        .collect::<Outcome<Vec<_>>>()?;
    if parts.len() == 1 {
        Ok(parts.into_iter().next().unwrap())
    } else {
        Ok(Prefix::zip(&parts)?)
    }
}

/// Solves the system to `depth`: exactly for strongly causal systems, by
/// the semantic check (or, failing that, a diagnosis) for weakly causal
/// ones.
fn solve_system(l: &Loaded, depth: usize, strategy: Strategy, budget: usize, seed: u64) -> Outcome<Solved> {
    require_bound(l)?;
    let analysis = dsl::analyze_causality(&l.sys, None, &l.bindings, seed)?;
    match analysis.static_verdict {
        StaticVerdict::StronglyCausal => {
            let e = dsl::elaborate(&l.sys, &l.bindings)?;
            let result = match e.transformer.as_det() {
                Some(t) => solver::solve_det(t, depth)?,
                None => solver::solve_inclusion_within(&e.transformer, depth, strategy, budget, Parallelism::default())?,
            };
            let method = if e.transformer.is_deterministic() { "fixpoint" } else { "inclusion" };
            Ok(Solved::new(e, result, method, analysis.verdict.to_string()))
        }
        StaticVerdict::WeaklyCausalOnly => {
            let e = dsl::elaborate_naive(&l.sys, &l.bindings)?;
            let report = dsl::semantic_check(&l.sys, &l.bindings, depth, seed)?;
            if let SemanticOutcome::Passed { values } = &report.outcome {
                let state = tuple_of(&e, values)?;
                let result = SolveResult {
                    prefixes: vec![state],
                    depth,
                    certificate: Dyadic::AtMost(depth),
                    iterations: depth,
                    strategy: None,
                    nodes: 0,
                };
                let verdict = format!("semantic-check-passed({depth})");
                return Ok(Solved::new(e, result, "semantic", verdict));
            }
            if let SemanticOutcome::Unresolved { stream, position } = &report.outcome {
                eprintln!("note: semantic check cannot resolve `{stream}` at position {position}");
            }
            match solver::diagnose_nonexpansive(&e.transformer, depth, DIAGNOSIS_SAMPLES, seed)? {
                Diagnosis::FixpointPrefixFound { prefix, .. } => {
                    let result = SolveResult {
                        prefixes: vec![prefix],
                        depth,
                        certificate: Dyadic::AtMost(depth),
                        iterations: depth,
                        strategy: None,
                        nodes: 0,
                    };
                    Ok(Solved::new(e, result, "search", "weakly-causal-only".into()))
                }
                other => {
                    eprintln!("diagnosis: {}", diagnosis_note(&other));
                    Err(Error::NoSolution { depth }.into())
                }
            }
        }
        StaticVerdict::Rejected { cycle } => {
            let e = dsl::elaborate_naive(&l.sys, &l.bindings)?;
            let d = solver::diagnose_nonexpansive(&e.transformer, depth, DIAGNOSIS_SAMPLES, seed)?;
            eprintln!("diagnosis: {}", diagnosis_note(&d));
            Err(Error::Rejected(format!("zero-delay cycle through {}", cycle.join(" -> "))).into())
        }
    }
}

fn emit(common: &Common, payload: String) -> Outcome<()> {
    match &common.output {
        Some(path) => fs::write(path, payload).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

pub fn run(command: Command) -> Outcome<u8> {
    match command {
        Command::Check { file, semantic_depth, common } => {
            let l = load(&file, &common)?;
            let r = dsl::analyze_causality(&l.sys, semantic_depth, &l.bindings, common.seed)?;
            emit(&common, report::check(&r, common.seed, common.format)?)?;
            Ok(if r.verdict.is_rejected() { EXIT_REJECTED } else { 0 })
        }
        Command::Solve { file, depth, strategy: arg, budget: flag, common } => {
            let l = load(&file, &common)?;
            let budget = budget(flag)?;
            let s = strategy(arg, common.seed, budget);
            let solved = solve_system(&l, depth, s, budget, common.seed)?;
            emit(&common, report::solve(&solved, arg, common.seed, budget, common.format)?)?;
            Ok(0)
        }
        Command::Dist { file, a, b, depth, common } => {
            let l = load(&file, &common)?;
            let mut solved = None;
            let hint = [&a, &b].iter().find_map(|n| l.sys.decl(n).map(|d| d.domain.clone()));
            let hint = hint.unwrap_or(Domain::Rational);
            let pa = operand(&l, &a, depth, &hint, &common, &mut solved)?;
            let pb = operand(&l, &b, depth, &hint, &common, &mut solved)?;
            if pa.domain() != pb.domain() {
                return Err(Error::DomainMismatch {
                    expected: pa.domain().to_string(),
                    found: pb.domain().to_string(),
                }
                .into());
            }
            let d = word_distance(&pa, &pb);
            emit(&common, report::dist(&a, &b, depth, d, common.seed, common.format)?)?;
            Ok(0)
        }
        Command::Sp { file, depth, init, common } => {
            let l = load(&file, &common)?;
            let t = strong_transformer(&l)?;
            let start = match &init {
                Some(path) => Some(io::set_from_json(t.input(), &read_json(path)?, None)?),
                None => None,
            };
            let set = solver::fix_sp(&t, depth, start.as_ref())?;
            emit(&common, report::set("sp", &set, depth, common.seed, common.format)?)?;
            Ok(0)
        }
        Command::Wp { file, depth, universe, max_universe, common } => {
            let l = load(&file, &common)?;
            let t = strong_transformer(&l)?;
            let universe = match &universe {
                Some(path) => io::set_from_json(t.input(), &read_json(path)?, Some(depth))?,
                None => full_universe(t.input(), depth, max_universe)?,
            };
            let set = solver::fix_wp(&t, depth, &universe)?;
            emit(&common, report::set("wp", &set, depth, common.seed, common.format)?)?;
            Ok(0)
        }
        Command::Verify { file, solution, common } => {
            let l = load(&file, &common)?;
            require_bound(&l)?;
            let analysis = dsl::analyze_causality(&l.sys, None, &l.bindings, common.seed)?;
            let e = match analysis.static_verdict {
                StaticVerdict::StronglyCausal => dsl::elaborate(&l.sys, &l.bindings)?,
                StaticVerdict::WeaklyCausalOnly => dsl::elaborate_naive(&l.sys, &l.bindings)?,
                StaticVerdict::Rejected { cycle } => {
                    return Err(Error::Rejected(format!("zero-delay cycle through {}", cycle.join(" -> "))).into())
                }
            };
            let prefixes = solution_prefixes(e.transformer.input(), &read_json(&solution)?)?;
            let members = prefixes
                .iter()
                .map(|p| solver::check_membership(&e.transformer, p))
                .collect::<Result<Vec<bool>, Error>>()?;
            emit(&common, report::verify(&prefixes, &members, common.seed, common.format)?)?;
            Ok(if members.iter().all(|&m| m) { 0 } else { EXIT_NO_SOLUTION })
        }
    }
}

fn operand(
    l: &Loaded,
    name: &str,
    depth: usize,
    hint: &Domain,
    common: &Common,
    solved: &mut Option<Solved>,
) -> Outcome<Prefix> {
    let Some(decl) = l.sys.decl(name) else {
        let spec = dsl::parse_input_spec(name).map_err(|diag| Failure::Parse {
            path: format!("operand `{name}`"),
            diag,
        })?;
        return Ok(dsl::spec_stream(&spec, hint)?.prefix(depth));
    };
    if let Role::Input(_) = decl.role {
        return l
            .bindings
            .get(name)
            .map(|s| s.prefix(depth))
            .ok_or_else(|| Failure::Usage(format!("input `{name}` has no binding")));
    }
    if solved.is_none() {
        let b = solver::DEFAULT_BUDGET;
        *solved = Some(solve_system(l, depth, Strategy::First, budget(None).unwrap_or(b), common.seed)?);
    }
    let s = solved.as_ref().unwrap();
    Ok(s.elaborated.project(&s.result.prefixes[0], name).expect("defined stream"))
}

fn strong_transformer(l: &Loaded) -> Outcome<Transformer> {
    require_bound(l)?;
    Ok(dsl::elaborate(&l.sys, &l.bindings)?.transformer)
}

fn full_universe(domain: &Domain, depth: usize, cap: usize) -> Outcome<PrefixSet> {
    let Some(n) = domain.letter_count() else {
        return Err(Failure::Usage(format!(
            "words over {domain} cannot be enumerated; pass --universe SETFILE"
        )));
    };
    match n.checked_pow(depth as u32) {
        Some(size) if size <= cap => Ok(PrefixSet::full(domain, depth)?),
        _ => Err(Failure::Usage(format!(
            "the universe of {n}^{depth} words exceeds --max-universe {cap}; pass --universe SETFILE"
        ))),
    }
}

/// Accepts a `solve` JSON report (its `state` field), an array of prefixes,
/// or a single prefix.
fn solution_prefixes(domain: &Domain, v: &Value) -> Outcome<Vec<Prefix>> {
    let prefixes = match v {
        Value::Object(o) => {
            let state = o
                .get("state")
                .ok_or_else(|| Failure::Usage("solution object has no `state` field".into()))?;
            io::prefixes_from_json(domain, state)?
        }
        Value::Array(items) if items.first().is_some_and(Value::is_array) => io::prefixes_from_json(domain, v)?,
        _ => vec![io::prefix_from_json(domain, v)?],
    };
    Ok(prefixes)
}
