//! A small synchronous equation language over streams.
//!
//! A system declares streams, binds inputs and defines every other stream
//! by an equation `f = e` or an inclusion `f in {e1, e2}` / `f in mix(a, b)`.
//! Analysis infers how far each reference is delayed and classifies the
//! system's cycles; elaboration turns it into a single transformer whose
//! fixpoints are the system's solutions.

mod analysis;
mod ast;
mod diag;
mod elaborate;
mod lexer;
mod parser;
mod print;

pub use analysis::{
    analyze_causality, dependencies, semantic_check, CausalityReport, Cycle, Dependency, InputUse, Occurrence,
    SemanticOutcome, SemanticReport, StaticVerdict, Verdict,
};
pub use ast::{Body, Decl, Defn, EqnSystem, Expr, ExprKind, InputSpec, Literal, Role, SetExpr, Span};
pub use diag::{DiagKind, Diagnostic};
pub use elaborate::{elaborate, elaborate_naive, input_streams, spec_stream, Bindings, Elaborated};
pub use parser::{parse, parse_input_spec, parse_syntax, validate};
pub use print::{print, print_expr};
