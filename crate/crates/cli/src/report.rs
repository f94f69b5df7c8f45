//! Rendering of command results as JSON, text or CSV.

use std::fmt::Write;

use causal_streams::dsl::{CausalityReport, Elaborated, SemanticOutcome, StaticVerdict, Verdict};
use causal_streams::io::{csv_string, prefix_to_json, prefixes_to_json, set_to_json};
use causal_streams::metric::Dyadic;
use causal_streams::solver::SolveResult;
use causal_streams::{Error, Prefix, PrefixSet};
use serde_json::{json, Map, Value};

use crate::{Format, StrategyArg};

pub struct Solved {
    pub elaborated: Elaborated,
    pub result: SolveResult,
    /// `fixpoint`, `inclusion`, `semantic` or `search`.
    pub method: &'static str,
    pub verdict: String,
}

impl Solved {
    pub fn new(elaborated: Elaborated, result: SolveResult, method: &'static str, verdict: String) -> Self {
        Solved {
            elaborated,
            result,
            method,
            verdict,
        }
    }

    /// A solution restricted to the output streams.
    fn outputs_of(&self, state: &Prefix) -> Result<Prefix, Error> {
        let e = &self.elaborated;
        let parts: Vec<Prefix> = e.outputs.iter().map(|o| e.project(state, o).expect("own stream")).collect();
        if parts.len() == 1 {
            Ok(parts.into_iter().next().unwrap())
        } else {
            Prefix::zip(&parts)
        }
    }
}

fn compact(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn dyadic_json(d: Dyadic) -> Value {
    json!({"bound": d.to_string(), "exponent": d.exponent(), "exact": d.is_exact()})
}

fn words(p: &Prefix) -> String {
    p.to_strings().join(" ")
}

fn strategy_name(arg: StrategyArg) -> &'static str {
    match arg {
        StrategyArg::First => "first",
        StrategyArg::Random => "random",
        StrategyArg::Exhaustive => "exhaustive",
    }
}

fn static_name(v: &StaticVerdict) -> &'static str {
    match v {
        StaticVerdict::StronglyCausal => "strongly-causal",
        StaticVerdict::WeaklyCausalOnly => "weakly-causal-only",
        StaticVerdict::Rejected { .. } => "rejected",
    }
}

pub fn check(r: &CausalityReport, seed: u64, format: Format) -> Result<String, Error> {
    let min_cycle = match r.verdict {
        Verdict::StronglyCausal { min_cycle_delay } => json!(min_cycle_delay),
        _ => Value::Null,
    };
    match format {
        Format::Json => {
            let semantic = r.semantic.as_ref().map(|s| {
                let inputs: Vec<Value> = s
                    .inputs
                    .iter()
                    .map(|i| json!({"name": i.name, "prefix": prefix_to_json(&i.prefix), "sampled": i.sampled}))
                    .collect();
                let outcome = match &s.outcome {
                    SemanticOutcome::Passed { values } => {
                        let values: Map<String, Value> =
                            values.iter().map(|(n, p)| (n.clone(), prefix_to_json(p))).collect();
                        json!({"passed": true, "values": values})
                    }
                    SemanticOutcome::Unresolved { stream, position } => {
                        json!({"passed": false, "stream": stream, "position": position})
                    }
                };
                json!({"depth": s.depth, "inputs": inputs, "outcome": outcome})
            });
            let v = json!({
                "command": "check",
                "seed": seed,
                "verdict": r.verdict.tag(),
                "summary": r.verdict.to_string(),
                "min_cycle_delay": min_cycle,
                "static": static_name(&r.static_verdict),
                "dependencies": r.dependencies.iter().map(|d| json!({
                    "from": d.from, "to": d.to, "delay": d.delay, "conditional": d.conditional,
                })).collect::<Vec<_>>(),
                "cycles": r.cycles.iter().map(|c| json!({"streams": c.streams, "delay": c.delay})).collect::<Vec<_>>(),
                "cycles_truncated": r.cycles_truncated,
                "semantic": semantic,
            });
            Ok(compact(&v))
        }
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "verdict: {}", r.verdict).unwrap();
            writeln!(out, "static analysis: {}", static_name(&r.static_verdict)).unwrap();
            for d in &r.dependencies {
                let cond = if d.conditional { " (conditional)" } else { "" };
                writeln!(out, "  {} <- {} delay {}{cond}", d.from, d.to, d.delay).unwrap();
            }
            for c in &r.cycles {
                writeln!(out, "cycle {} : delay {}", c.streams.join(" -> "), c.delay).unwrap();
            }
            if r.cycles_truncated {
                writeln!(out, "(more cycles not listed)").unwrap();
            }
            if let Some(s) = &r.semantic {
                writeln!(out, "semantic check to depth {} (seed {seed}):", s.depth).unwrap();
                for i in &s.inputs {
                    let how = if i.sampled { "sampled" } else { "bound" };
                    writeln!(out, "  input {} ({how}) = {}", i.name, words(&i.prefix)).unwrap();
                }
                match &s.outcome {
                    SemanticOutcome::Passed { values } => {
                        for (n, p) in values {
                            writeln!(out, "  {n} = {}", words(p)).unwrap();
                        }
                    }
                    SemanticOutcome::Unresolved { stream, position } => {
                        writeln!(out, "  unresolved: {stream} at position {position}").unwrap();
                    }
                }
            }
            Ok(out)
        }
        Format::Csv => {
            let mut rows = vec![vec!["from".to_string(), "to".into(), "delay".into(), "conditional".into()]];
            for d in &r.dependencies {
                rows.push(vec![d.from.clone(), d.to.clone(), d.delay.to_string(), d.conditional.to_string()]);
            }
            rows.push(vec!["verdict".into(), r.verdict.tag().into(), format!("seed={seed}")]);
            csv_string(rows)
        }
    }
}

pub fn solve(s: &Solved, arg: StrategyArg, seed: u64, budget: usize, format: Format) -> Result<String, Error> {
    let r = &s.result;
    let e = &s.elaborated;
    let outputs = r.prefixes.iter().map(|p| s.outputs_of(p)).collect::<Result<Vec<_>, _>>()?;
    match format {
        Format::Json => {
            let streams: Vec<Value> = r
                .prefixes
                .iter()
                .map(|p| {
                    let m: Map<String, Value> =
                        e.split(p).into_iter().map(|(n, w)| (n, prefix_to_json(&w))).collect();
                    Value::Object(m)
                })
                .collect();
            let v = json!({
                "command": "solve",
                "method": s.method,
                "verdict": s.verdict,
                "delay": e.transformer.delay().get(),
                "depth": r.depth,
                "strategy": strategy_name(arg),
                "seed": seed,
                "budget": budget,
                "certificate": dyadic_json(r.certificate),
                "iterations": r.iterations,
                "nodes": r.nodes,
                "outputs": e.outputs,
                "prefixes": prefixes_to_json(&outputs),
                "streams": streams,
                "state": prefixes_to_json(&r.prefixes),
            });
            Ok(compact(&v))
        }
        Format::Text => {
            let mut out = String::new();
            writeln!(
                out,
                "{} solution(s) to depth {} by {} ({}), strategy {}, seed {seed}",
                r.prefixes.len(),
                r.depth,
                s.method,
                s.verdict,
                strategy_name(arg)
            )
            .unwrap();
            writeln!(
                out,
                "certificate: d(f, T(f)) {} after {} iterations, {} nodes",
                r.certificate, r.iterations, r.nodes
            )
            .unwrap();
            for (i, p) in r.prefixes.iter().enumerate() {
                writeln!(out, "solution {}:", i + 1).unwrap();
                for (n, w) in e.split(p) {
                    let mark = if e.outputs.contains(&n) { "*" } else { " " };
                    writeln!(out, " {mark}{n} = {}", words(&w)).unwrap();
                }
            }
            Ok(out)
        }
        Format::Csv => {
            let mut header = vec!["solution".to_string(), "stream".into()];
            header.extend((0..r.depth).map(|k| k.to_string()));
            let mut rows = vec![header];
            for (i, p) in r.prefixes.iter().enumerate() {
                for (n, w) in e.split(p) {
                    let mut row = vec![(i + 1).to_string(), n];
                    row.extend(w.to_strings());
                    rows.push(row);
                }
            }
            csv_string(rows)
        }
    }
}

pub fn dist(a: &str, b: &str, depth: usize, d: Dyadic, seed: u64, format: Format) -> Result<String, Error> {
    match format {
        Format::Json => Ok(compact(&json!({
            "command": "dist", "a": a, "b": b, "depth": depth, "seed": seed, "distance": dyadic_json(d),
        }))),
        Format::Text => Ok(format!("d({a}, {b}) = {d}\n")),
        Format::Csv => csv_string([
            vec!["a".to_string(), "b".into(), "depth".into(), "distance".into()],
            vec![a.into(), b.into(), depth.to_string(), d.to_string()],
        ]),
    }
}

pub fn set(command: &str, set: &PrefixSet, depth: usize, seed: u64, format: Format) -> Result<String, Error> {
    match format {
        Format::Json => Ok(compact(&json!({
            "command": command, "depth": depth, "seed": seed, "size": set.len(), "set": set_to_json(set),
        }))),
        Format::Text => {
            let mut out = format!("{command} to depth {depth}: {} prefix(es)\n", set.len());
            for p in set.iter() {
                writeln!(out, "  {}", words(p)).unwrap();
            }
            Ok(out)
        }
        Format::Csv => csv_string(set.iter().map(Prefix::to_strings)),
    }
}

pub fn verify(prefixes: &[Prefix], members: &[bool], seed: u64, format: Format) -> Result<String, Error> {
    let all = members.iter().all(|&m| m);
    let verdict = if all { "solution" } else { "not-a-solution" };
    match format {
        Format::Json => {
            let checked: Vec<Value> = prefixes
                .iter()
                .zip(members)
                .map(|(p, m)| json!({"prefix": prefix_to_json(p), "member": m}))
                .collect();
            Ok(compact(&json!({"command": "verify", "seed": seed, "verdict": verdict, "checked": checked})))
        }
        Format::Text => {
            let mut out = format!("{verdict}\n");
            for (p, m) in prefixes.iter().zip(members) {
                writeln!(out, "  [{}] {}", if *m { "ok" } else { "no" }, words(p)).unwrap();
            }
            Ok(out)
        }
        Format::Csv => {
            let rows = prefixes.iter().zip(members).map(|(p, m)| {
                let mut row = vec![m.to_string()];
                row.extend(p.to_strings());
                row
            });
            csv_string(rows)
        }
    }
}
