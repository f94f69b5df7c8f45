use std::collections::HashMap;

use num::BigRational;

use super::ast::*;
use super::diag::{DiagKind, Diagnostic};
use super::lexer::{tokenize, Tok, Token};
use crate::coeff::Domain;

const RESERVED: &[&str] = &[
    "stream", "bool", "rat", "alphabet", "input", "in", "if", "then", "else", "not", "cons", "X", "mix",
];

/// Builtins usable inside expressions, with their arities.
pub const EXPR_BUILTINS: &[(&str, usize)] = &[("delay", 1), ("succ", 1), ("register", 3)];

type PResult<T> = Result<T, Diagnostic>;

fn diag(kind: DiagKind, span: Span, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::new(kind, span.line, span.column, msg)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        diag(
            DiagKind::Syntax,
            self.span(),
            format!("expected {wanted}, found {}", self.peek().describe()),
        )
    }

    fn expect(&mut self, t: Tok) -> PResult<Span> {
        if *self.peek() == t {
            Ok(self.next().span)
        } else {
            Err(self.unexpected(&t.describe()))
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<Span> {
        if self.is_kw(kw) {
            Ok(self.next().span)
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    fn ident(&mut self) -> PResult<(String, Span)> {
        match self.peek().clone() {
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => {
                let span = self.next().span;
                Ok((s, span))
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn system(&mut self) -> PResult<EqnSystem> {
        let mut sys = EqnSystem {
            decls: Vec::new(),
            defns: Vec::new(),
        };
        while *self.peek() != Tok::Eof {
            if self.is_kw("stream") {
                sys.decls.push(self.decl()?);
            } else {
                sys.defns.push(self.defn()?);
            }
        }
        Ok(sys)
    }

    fn decl(&mut self) -> PResult<Decl> {
        let span = self.keyword("stream")?;
        let (name, _) = self.ident()?;
        self.expect(Tok::Colon)?;
        let domain = self.domain()?;
        let role = if self.is_kw("input") {
            self.next();
            if *self.peek() == Tok::Eq {
                self.next();
                Role::Input(Some(self.input_spec()?))
            } else {
                Role::Input(None)
            }
        } else {
            Role::Defined
        };
        self.expect(Tok::Semi)?;
        Ok(Decl {
            name,
            domain,
            role,
            span,
        })
    }

    fn domain(&mut self) -> PResult<Domain> {
        let span = self.span();
        if self.is_kw("bool") {
            self.next();
            return Ok(Domain::Gf2);
        }
        if self.is_kw("rat") {
            self.next();
            return Ok(Domain::Rational);
        }
        if self.is_kw("alphabet") {
            self.next();
            self.expect(Tok::LBrace)?;
            let mut syms = vec![self.ident()?.0];
            while *self.peek() == Tok::Comma {
                self.next();
                syms.push(self.ident()?.0);
            }
            self.expect(Tok::RBrace)?;
            return Domain::alphabet(syms).map_err(|e| diag(DiagKind::DuplicateDefinition, span, e.to_string()));
        }
        Err(self.unexpected("`bool`, `rat` or `alphabet`"))
    }

    fn input_spec(&mut self) -> PResult<InputSpec> {
        let (kind, span) = match self.peek().clone() {
            Tok::Ident(s) => (s, self.next().span),
            _ => return Err(self.unexpected("`poly`, `cycle`, `ramp` or `const`")),
        };
        self.expect(Tok::LParen)?;
        let mut lits = vec![self.literal()?];
        while *self.peek() == Tok::Comma {
            self.next();
            lits.push(self.literal()?);
        }
        self.expect(Tok::RParen)?;
        let arity = |n: usize, lits: &[Literal]| {
            if lits.len() == n {
                Ok(())
            } else {
                Err(diag(DiagKind::Syntax, span, format!("`{kind}` takes {n} argument(s)")))
            }
        };
        match kind.as_str() {
            "poly" => Ok(InputSpec::Poly(lits)),
            "cycle" => Ok(InputSpec::Cycle(lits)),
            "ramp" => {
                arity(2, &lits)?;
                let step = lits.pop().unwrap();
                Ok(InputSpec::Ramp(lits.pop().unwrap(), step))
            }
            "const" => {
                arity(1, &lits)?;
                Ok(InputSpec::Const(lits.pop().unwrap()))
            }
            _ => Err(diag(
                DiagKind::UnknownBuiltin,
                span,
                format!("unknown input form `{kind}`; expected poly, cycle, ramp or const"),
            )),
        }
    }

    fn number(&mut self) -> Option<BigRational> {
        match (self.peek().clone(), self.peek_at(1).clone()) {
            (Tok::Num(r), _) => {
                self.next();
                Some(r)
            }
            (Tok::Minus, Tok::Num(r)) => {
                self.next();
                self.next();
                Some(-r)
            }
            _ => None,
        }
    }

    fn literal(&mut self) -> PResult<Literal> {
        if let Some(r) = self.number() {
            return Ok(Literal::Num(r));
        }
        match self.peek() {
            Tok::Ident(_) => Ok(Literal::Sym(self.ident()?.0)),
            _ => Err(self.unexpected("a literal")),
        }
    }

    fn defn(&mut self) -> PResult<Defn> {
        let (name, span) = self.ident()?;
        let body = if *self.peek() == Tok::Eq {
            self.next();
            Body::Eq(self.expr()?)
        } else if self.is_kw("in") {
            self.next();
            Body::In(self.set_expr()?)
        } else {
            return Err(self.unexpected("`=` or `in`"));
        };
        self.expect(Tok::Semi)?;
        Ok(Defn { name, body, span })
    }

    fn set_expr(&mut self) -> PResult<SetExpr> {
        if self.is_kw("mix") {
            self.next();
            self.expect(Tok::LParen)?;
            let a = self.expr()?;
            self.expect(Tok::Comma)?;
            let b = self.expr()?;
            self.expect(Tok::RParen)?;
            return Ok(SetExpr::Mix(Box::new(a), Box::new(b)));
        }
        self.expect(Tok::LBrace)?;
        let mut members = vec![self.expr()?];
        while *self.peek() == Tok::Comma {
            self.next();
            members.push(self.expr()?);
        }
        self.expect(Tok::RBrace)?;
        Ok(SetExpr::Members(members))
    }

    fn expr(&mut self) -> PResult<Expr> {
        if self.is_kw("if") {
            let span = self.next().span;
            let c = self.expr()?;
            self.keyword("then")?;
            let t = self.expr()?;
            self.keyword("else")?;
            let e = self.expr()?;
            return Ok(Expr::new(ExprKind::Ite(Box::new(c), Box::new(t), Box::new(e)), span));
        }
        let mut lhs = self.product()?;
        while *self.peek() == Tok::Plus {
            self.next();
            let rhs = self.product()?;
            let span = lhs.span;
            lhs = Expr::new(ExprKind::Add(Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn product(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Star {
            self.next();
            let rhs = self.unary()?;
            let span = lhs.span;
            lhs = Expr::new(ExprKind::Mul(Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        let span = self.span();
        if self.is_kw("not") {
            self.next();
            let e = self.unary()?;
            return Ok(Expr::new(ExprKind::Not(Box::new(e)), span));
        }
        let scale_ahead = match self.peek() {
            Tok::Num(_) => *self.peek_at(1) == Tok::Dot,
            Tok::Minus => matches!(self.peek_at(1), Tok::Num(_)) && *self.peek_at(2) == Tok::Dot,
            _ => false,
        };
        if scale_ahead {
            let r = self.number().expect("number ahead");
            self.expect(Tok::Dot)?;
            let e = self.unary()?;
            return Ok(Expr::new(ExprKind::Scale(r, Box::new(e)), span));
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Expr> {
        let span = self.span();
        if let Some(r) = self.number() {
            return Ok(Expr::new(ExprKind::Num(r), span));
        }
        match self.peek().clone() {
            Tok::LParen => {
                self.next();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(s) if s == "if" => self.expr(),
            Tok::Ident(s) if s == "X" => {
                self.next();
                Ok(Expr::new(ExprKind::X, span))
            }
            Tok::Ident(s) if s == "cons" => {
                self.next();
                self.expect(Tok::LParen)?;
                let head = self.literal()?;
                self.expect(Tok::Comma)?;
                let tail = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(Expr::new(ExprKind::Cons(head, Box::new(tail)), span))
            }
            Tok::Ident(_) => {
                let (name, span) = self.ident()?;
                if *self.peek() != Tok::LParen {
                    return Ok(Expr::new(ExprKind::Name(name), span));
                }
                self.next();
                let mut args = Vec::new();
                if *self.peek() != Tok::RParen {
                    args.push(self.expr()?);
                    while *self.peek() == Tok::Comma {
                        self.next();
                        args.push(self.expr()?);
                    }
                }
                self.expect(Tok::RParen)?;
                Ok(Expr::new(ExprKind::Call(name, args), span))
            }
            _ => Err(self.unexpected("an expression")),
        }
    }
}

/// Parses only, without name resolution or domain checking.
pub fn parse_syntax(src: &str) -> Result<EqnSystem, Diagnostic> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
    };
    p.system()
}

/// Parses a standalone input binding such as `ramp(1, 1)`.
pub fn parse_input_spec(src: &str) -> Result<InputSpec, Diagnostic> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
    };
    let spec = p.input_spec()?;
    p.expect(Tok::Eof)?;
    Ok(spec)
}

/// Parses and validates a system: names resolve, every defined stream has
/// exactly one definition and every expression fits its stream's domain.
pub fn parse(src: &str) -> Result<EqnSystem, Diagnostic> {
    let sys = parse_syntax(src)?;
    validate(&sys)?;
    Ok(sys)
}

pub fn validate(sys: &EqnSystem) -> Result<(), Diagnostic> {
    let mut decls: HashMap<&str, &Decl> = HashMap::new();
    for d in &sys.decls {
        if decls.insert(&d.name, d).is_some() {
            return Err(diag(
                DiagKind::DuplicateDefinition,
                d.span,
                format!("stream `{}` is declared twice", d.name),
            ));
        }
        if let Role::Input(Some(spec)) = &d.role {
            check_spec(spec, &d.domain, d.span)?;
        }
    }
    let mut defined: HashMap<&str, Span> = HashMap::new();
    for def in &sys.defns {
        let Some(decl) = decls.get(def.name.as_str()) else {
            return Err(diag(
                DiagKind::UndeclaredName,
                def.span,
                format!("`{}` is not declared", def.name),
            ));
        };
        if decl.role != Role::Defined {
            return Err(diag(
                DiagKind::DuplicateDefinition,
                def.span,
                format!("input stream `{}` cannot be defined", def.name),
            ));
        }
        if defined.insert(&def.name, def.span).is_some() {
            return Err(diag(
                DiagKind::DuplicateDefinition,
                def.span,
                format!("`{}` is defined more than once", def.name),
            ));
        }
        let checker = Checker { decls: &decls };
        match &def.body {
            Body::Eq(e) => checker.check(e, &decl.domain)?,
            Body::In(SetExpr::Members(ms)) => {
                for m in ms {
                    checker.check(m, &decl.domain)?;
                }
            }
            Body::In(SetExpr::Mix(a, b)) => {
                if decl.domain != Domain::Gf2 {
                    return Err(diag(
                        DiagKind::DomainMismatch,
                        def.span,
                        format!("`mix` produces bool, but `{}` is {}", def.name, decl.domain),
                    ));
                }
                checker.check(a, &Domain::Gf2)?;
                checker.check(b, &Domain::Gf2)?;
            }
        }
    }
    for d in &sys.decls {
        if d.role == Role::Defined && !defined.contains_key(d.name.as_str()) {
            return Err(diag(
                DiagKind::MissingDefinition,
                d.span,
                format!("stream `{}` has no equation or inclusion", d.name),
            ));
        }
    }
    Ok(())
}

fn check_spec(spec: &InputSpec, domain: &Domain, span: Span) -> Result<(), Diagnostic> {
    let fits = |l: &Literal| {
        l.to_coeff(domain).map(|_| ()).ok_or_else(|| {
            diag(
                DiagKind::DomainMismatch,
                span,
                format!("literal {} is not in {domain}", render_literal(l)),
            )
        })
    };
    let needs_field = || {
        if domain.is_field() {
            Ok(())
        } else {
            Err(diag(DiagKind::DomainMismatch, span, format!("arithmetic input on {domain}")))
        }
    };
    match spec {
        InputSpec::Poly(ls) => {
            needs_field()?;
            ls.iter().try_for_each(fits)
        }
        InputSpec::Cycle(ls) => ls.iter().try_for_each(fits),
        InputSpec::Ramp(a, b) => {
            needs_field()?;
            fits(a)?;
            fits(b)
        }
        InputSpec::Const(a) => fits(a),
    }
}

pub(crate) fn render_literal(l: &Literal) -> String {
    match l {
        Literal::Num(r) => r.to_string(),
        Literal::Sym(s) => s.clone(),
    }
}

struct Checker<'a> {
    decls: &'a HashMap<&'a str, &'a Decl>,
}

impl Checker<'_> {
    fn check(&self, e: &Expr, want: &Domain) -> Result<(), Diagnostic> {
        let mismatch = |what: String| diag(DiagKind::DomainMismatch, e.span, what);
        let field = || {
            if want.is_field() {
                Ok(())
            } else {
                Err(mismatch(format!("arithmetic on {want}")))
            }
        };
        match &e.kind {
            ExprKind::Num(r) => {
                if Literal::Num(r.clone()).to_coeff(want).is_none() {
                    return Err(mismatch(format!("literal {r} is not in {want}")));
                }
                Ok(())
            }
            ExprKind::Name(n) => match self.decls.get(n.as_str()) {
                Some(d) if d.domain == *want => Ok(()),
                Some(d) => Err(mismatch(format!("`{n}` is {}, expected {want}", d.domain))),
                None if Literal::Sym(n.clone()).to_coeff(want).is_some() => Ok(()),
                None => Err(diag(DiagKind::UndeclaredName, e.span, format!("`{n}` is not declared"))),
            },
            ExprKind::X => field(),
            ExprKind::Add(a, b) | ExprKind::Mul(a, b) => {
                field()?;
                self.check(a, want)?;
                self.check(b, want)
            }
            ExprKind::Scale(r, a) => {
                field()?;
                if Literal::Num(r.clone()).to_coeff(want).is_none() {
                    return Err(mismatch(format!("scalar {r} is not in {want}")));
                }
                self.check(a, want)
            }
            ExprKind::Cons(head, tail) => {
                if head.to_coeff(want).is_none() {
                    return Err(mismatch(format!("literal {} is not in {want}", render_literal(head))));
                }
                self.check(tail, want)
            }
            ExprKind::Ite(c, t, f) => {
                self.check(c, &Domain::Gf2)?;
                self.check(t, want)?;
                self.check(f, want)
            }
            ExprKind::Not(a) => {
                if *want != Domain::Gf2 {
                    return Err(mismatch(format!("`not` produces bool, expected {want}")));
                }
                self.check(a, want)
            }
            ExprKind::Call(name, args) => {
                let Some(&(_, arity)) = EXPR_BUILTINS.iter().find(|(n, _)| n == name) else {
                    return Err(diag(
                        DiagKind::UnknownBuiltin,
                        e.span,
                        format!("unknown builtin `{name}`"),
                    ));
                };
                if args.len() != arity {
                    return Err(diag(
                        DiagKind::Syntax,
                        e.span,
                        format!("`{name}` takes {arity} argument(s), found {}", args.len()),
                    ));
                }
                match name.as_str() {
                    "succ" => {
                        field()?;
                        self.check(&args[0], want)
                    }
                    "register" => {
                        self.check(&args[0], want)?;
                        self.check(&args[1], &Domain::Gf2)?;
                        match const_literal(&args[2]) {
                            Some(l) if l.to_coeff(want).is_some() => Ok(()),
                            _ => Err(diag(
                                DiagKind::DomainMismatch,
                                args[2].span,
                                format!("register initial value must be a literal in {want}"),
                            )),
                        }
                    }
                    _ => self.check(&args[0], want),
                }
            }
        }
    }
}

/// A literal written in expression position (the register's initial value).
pub(crate) fn const_literal(e: &Expr) -> Option<Literal> {
    match &e.kind {
        ExprKind::Num(r) => Some(Literal::Num(r.clone())),
        ExprKind::Name(s) => Some(Literal::Sym(s.clone())),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const FIG1: &str = "
        stream z : rat input;
        stream h1 : rat; stream h2 : rat; stream h3 : rat; stream y : rat;
        h1 = X*h2;
        h3 = z + h1;
        h2 = h3;
        y = h3;
    ";

    #[test]
    fn parses_fig1() {
        let sys = parse(FIG1).unwrap();
        assert_eq!(sys.defns.len(), 4);
        assert_eq!(sys.inputs().len(), 1);
        match &sys.defn("h1").unwrap().body {
            Body::Eq(Expr { kind: ExprKind::Mul(a, _), .. }) => assert_eq!(a.kind, ExprKind::X),
            b => panic!("{b:?}"),
        }
    }

    #[test]
    fn precedence() {
        let sys = parse_syntax("f = a + b * not c;").unwrap();
        let Body::Eq(e) = &sys.defns[0].body else { panic!() };
        let ExprKind::Add(_, rhs) = &e.kind else { panic!("{e:?}") };
        let ExprKind::Mul(_, n) = &rhs.kind else { panic!("{rhs:?}") };
        assert!(matches!(n.kind, ExprKind::Not(_)));
        let sys = parse_syntax("f = -1/2 . g * h;").unwrap();
        let Body::Eq(e) = &sys.defns[0].body else { panic!() };
        assert!(matches!(&e.kind, ExprKind::Mul(a, _) if matches!(a.kind, ExprKind::Scale(..))));
    }

    #[test]
    fn self_loop_parses() {
        assert!(parse("stream f : rat; f = f + 1;").is_ok());
    }

    #[test]
    fn diagnostics_are_located() {
        let d = parse("stream f : rat;\nf = g;").unwrap_err();
        assert_eq!(d.kind, DiagKind::UndeclaredName);
        assert_eq!((d.line, d.column), (2, 5));

        let d = parse("stream f : rat; f = 1; f = 2;").unwrap_err();
        assert_eq!(d.kind, DiagKind::DuplicateDefinition);
        let d = parse("stream f : rat; stream f : bool; f = 1;").unwrap_err();
        assert_eq!(d.kind, DiagKind::DuplicateDefinition);
        let d = parse("stream f : rat;").unwrap_err();
        assert_eq!(d.kind, DiagKind::MissingDefinition);
        let d = parse("stream f : rat; stream b : bool; f = b;").unwrap_err();
        assert_eq!(d.kind, DiagKind::DomainMismatch);
        let d = parse("stream f : bool; f = 2;").unwrap_err();
        assert_eq!(d.kind, DiagKind::DomainMismatch);
        let d = parse("stream f : rat; f = frob(f);").unwrap_err();
        assert_eq!(d.kind, DiagKind::UnknownBuiltin);
        let d = parse("stream f : rat\nf = 1;").unwrap_err();
        assert_eq!((d.kind, d.line, d.column), (DiagKind::Syntax, 2, 1));
        let d = parse("stream z : rat input; z = 1;").unwrap_err();
        assert_eq!(d.kind, DiagKind::DuplicateDefinition);
    }

    #[test]
    fn alphabet_symbols_resolve() {
        let src = "stream s : alphabet {a, b}; s = cons(a, b);";
        assert!(parse(src).is_ok());
        assert_eq!(parse("stream s : alphabet {a, b}; s = c;").unwrap_err().kind, DiagKind::UndeclaredName);
    }

    #[test]
    fn input_specs() {
        assert_eq!(
            parse_input_spec("ramp(1, 1)").unwrap(),
            InputSpec::Ramp(Literal::Num(BigRational::from_integer(1.into())), Literal::Num(BigRational::from_integer(1.into())))
        );
        assert!(parse("stream z : bool input = poly(2); stream f : bool; f = z;").is_err());
        assert!(parse("stream z : bool input = cycle(1, 0); stream f : bool; f = z;").is_ok());
    }
}
