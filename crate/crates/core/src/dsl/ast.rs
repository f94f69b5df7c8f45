use num::BigRational;

use crate::coeff::{Coeff, Domain};

/// Source position, 1-based. Positions never take part in AST equality so
/// that a printed and reparsed system compares equal to the original.
#[derive(Clone, Copy, Debug, Default)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl Eq for Span {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Literal {
    Num(BigRational),
    Sym(String),
}

impl Literal {
    /// The coefficient this literal denotes in `domain`, if any.
    pub fn to_coeff(&self, domain: &Domain) -> Option<Coeff> {
        match (self, domain) {
            (Literal::Num(r), Domain::Rational) => Some(Coeff::Rat(r.clone())),
            (Literal::Num(r), Domain::Gf2) if r.is_integer() => {
                let n = r.to_integer();
                if n == 0.into() {
                    Some(Coeff::Bit(false))
                } else if n == 1.into() {
                    Some(Coeff::Bit(true))
                } else {
                    None
                }
            }
            (Literal::Sym(s), Domain::Alphabet(syms)) => {
                syms.iter().position(|x| x == s).map(|i| Coeff::Sym(i as u32))
            }
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Literal::Num(r) if *r == BigRational::from_integer(0.into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    /// A field literal, embedded as `(a, 0, 0, …)`.
    Num(BigRational),
    /// A declared stream or, failing that, an alphabet symbol read as a
    /// constant stream.
    Name(String),
    X,
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Scale(BigRational, Box<Expr>),
    Cons(Literal, Box<Expr>),
    Ite(Box<Expr>, Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    Call(String, Vec<Expr>),
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Expr {
        Expr { kind, span }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetExpr {
    Members(Vec<Expr>),
    Mix(Box<Expr>, Box<Expr>),
}

impl SetExpr {
    pub fn branching(&self) -> usize {
        match self {
            SetExpr::Members(ms) => ms.len(),
            SetExpr::Mix(..) => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Body {
    Eq(Expr),
    In(SetExpr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Defn {
    pub name: String,
    pub body: Body,
    pub span: Span,
}

/// How an input stream is bound in the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputSpec {
    /// Finitely many coefficients, then zeros.
    Poly(Vec<Literal>),
    /// The given letters repeated forever.
    Cycle(Vec<Literal>),
    /// `a, a+b, a+2b, …`
    Ramp(Literal, Literal),
    /// `a, a, a, …`
    Const(Literal),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Role {
    Defined,
    Input(Option<InputSpec>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decl {
    pub name: String,
    pub domain: Domain,
    pub role: Role,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqnSystem {
    pub decls: Vec<Decl>,
    pub defns: Vec<Defn>,
}

impl EqnSystem {
    pub fn decl(&self, name: &str) -> Option<&Decl> {
        self.decls.iter().find(|d| d.name == name)
    }

    pub fn defn(&self, name: &str) -> Option<&Defn> {
        self.defns.iter().find(|d| d.name == name)
    }

    /// Defined streams in declaration order.
    pub fn defined(&self) -> Vec<&Decl> {
        self.decls.iter().filter(|d| d.role == Role::Defined).collect()
    }

    pub fn inputs(&self) -> Vec<&Decl> {
        self.decls.iter().filter(|d| d.role != Role::Defined).collect()
    }

    pub fn is_deterministic(&self) -> bool {
        self.defns.iter().all(|d| matches!(d.body, Body::Eq(_)))
    }
}
