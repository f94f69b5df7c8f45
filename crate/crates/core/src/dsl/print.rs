use std::fmt::Write;

use super::ast::*;
use super::parser::render_literal;

/// Canonical, fully parenthesized source text. Parsing it yields the same
/// system.
pub fn print(sys: &EqnSystem) -> String {
    let mut out = String::new();
    for d in &sys.decls {
        write!(out, "stream {} : {}", d.name, d.domain).unwrap();
        if let Role::Input(spec) = &d.role {
            out.push_str(" input");
            if let Some(spec) = spec {
                write!(out, " = {}", print_spec(spec)).unwrap();
            }
        }
        out.push_str(";\n");
    }
    for d in &sys.defns {
        match &d.body {
            Body::Eq(e) => writeln!(out, "{} = {};", d.name, print_expr(e)).unwrap(),
            Body::In(s) => writeln!(out, "{} in {};", d.name, print_set(s)).unwrap(),
        }
    }
    out
}

pub fn print_spec(spec: &InputSpec) -> String {
    let list = |ls: &[Literal]| ls.iter().map(render_literal).collect::<Vec<_>>().join(", ");
    match spec {
        InputSpec::Poly(ls) => format!("poly({})", list(ls)),
        InputSpec::Cycle(ls) => format!("cycle({})", list(ls)),
        InputSpec::Ramp(a, b) => format!("ramp({}, {})", render_literal(a), render_literal(b)),
        InputSpec::Const(a) => format!("const({})", render_literal(a)),
    }
}

pub fn print_set(s: &SetExpr) -> String {
    match s {
        SetExpr::Members(ms) => {
            let parts: Vec<String> = ms.iter().map(print_expr).collect();
            format!("{{{}}}", parts.join(", "))
        }
        SetExpr::Mix(a, b) => format!("mix({}, {})", print_expr(a), print_expr(b)),
    }
}

pub fn print_expr(e: &Expr) -> String {
    match &e.kind {
        ExprKind::Num(r) => r.to_string(),
        ExprKind::Name(n) => n.clone(),
        ExprKind::X => "X".into(),
        ExprKind::Add(a, b) => format!("({} + {})", print_expr(a), print_expr(b)),
        ExprKind::Mul(a, b) => format!("({} * {})", print_expr(a), print_expr(b)),
        ExprKind::Scale(r, a) => format!("({r} . {})", print_expr(a)),
        ExprKind::Cons(l, a) => format!("cons({}, {})", render_literal(l), print_expr(a)),
        ExprKind::Ite(c, t, f) => format!("(if {} then {} else {})", print_expr(c), print_expr(t), print_expr(f)),
        ExprKind::Not(a) => format!("(not {})", print_expr(a)),
        ExprKind::Call(n, args) => {
            let parts: Vec<String> = args.iter().map(print_expr).collect();
            format!("{n}({})", parts.join(", "))
        }
    }
}

#[cfg(test)]
mod tests {
    use num::BigRational;
    use proptest::prelude::*;

    use super::*;
    use crate::coeff::Domain;
    use crate::dsl::parser::parse_syntax;

    fn leaf() -> impl Strategy<Value = Expr> {
        let num = (-5i64..6, 1i64..4).prop_map(|(n, d)| BigRational::new(n.into(), d.into()));
        prop_oneof![
            num.prop_map(ExprKind::Num),
            prop::sample::select(vec!["f", "g", "z"]).prop_map(|n| ExprKind::Name(n.into())),
            Just(ExprKind::X),
        ]
        .prop_map(|k| Expr::new(k, Span::default()))
    }

    fn expr() -> impl Strategy<Value = Expr> {
        leaf().prop_recursive(4, 24, 3, |inner| {
            let b = |e: Expr| Box::new(e);
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(move |(x, y)| ExprKind::Add(b(x), b(y))),
                (inner.clone(), inner.clone()).prop_map(move |(x, y)| ExprKind::Mul(b(x), b(y))),
                (-3i64..4, inner.clone()).prop_map(move |(r, x)| ExprKind::Scale(BigRational::from_integer(r.into()), b(x))),
                (0i64..2, inner.clone()).prop_map(move |(h, x)| ExprKind::Cons(Literal::Num(BigRational::from_integer(h.into())), b(x))),
                (inner.clone(), inner.clone(), inner.clone())
                    .prop_map(move |(c, t, f)| ExprKind::Ite(b(c), b(t), b(f))),
                inner.clone().prop_map(move |x| ExprKind::Not(b(x))),
                inner.clone().prop_map(|x| ExprKind::Call("delay".into(), vec![x])),
            ]
            .prop_map(|k| Expr::new(k, Span::default()))
        })
    }

    fn system() -> impl Strategy<Value = EqnSystem> {
        (expr(), prop::collection::vec(expr(), 1..3), any::<bool>()).prop_map(|(e, members, mix)| {
            let decl = |name: &str, role| Decl {
                name: name.into(),
                domain: Domain::Rational,
                role,
                span: Span::default(),
            };
            let set = if mix {
                SetExpr::Mix(Box::new(members[0].clone()), Box::new(e.clone()))
            } else {
                SetExpr::Members(members)
            };
            EqnSystem {
                decls: vec![
                    decl("z", Role::Input(Some(InputSpec::Ramp(Literal::Num(BigRational::from_integer(1.into())), Literal::Num(BigRational::from_integer((-1).into())))))),
                    decl("f", Role::Defined),
                    decl("g", Role::Defined),
                ],
                defns: vec![
                    Defn { name: "f".into(), body: Body::Eq(e), span: Span::default() },
                    Defn { name: "g".into(), body: Body::In(set), span: Span::default() },
                ],
            }
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(sys in system()) {
            let text = print(&sys);
            let back = parse_syntax(&text).map_err(|d| TestCaseError::fail(format!("{d}\n{text}")))?;
            prop_assert_eq!(back, sys);
        }
    }

    #[test]
    fn prints_canonically() {
        let sys = parse_syntax("stream a : alphabet {p, q}; h = X*h2 + -1/2 . z; s in {cons(p, s), s};").unwrap();
        let text = print(&sys);
        assert_eq!(
            text,
            "stream a : alphabet {p, q};\nh = ((X * h2) + (-1/2 . z));\ns in {cons(p, s), s};\n"
        );
    }
}
