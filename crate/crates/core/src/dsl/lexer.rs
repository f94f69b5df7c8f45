use num::{BigInt, BigRational};

use super::ast::Span;
use super::diag::{DiagKind, Diagnostic};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// Unsigned integer or `p/q`.
    Num(BigRational),
    Colon,
    Semi,
    Eq,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Plus,
    Star,
    Dot,
    Minus,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(r) => format!("`{r}`"),
            Tok::Eof => "end of input".into(),
            t => format!("`{}`", t.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::Colon => ":",
            Tok::Semi => ";",
            Tok::Eq => "=",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Plus => "+",
            Tok::Star => "*",
            Tok::Dot => ".",
            Tok::Minus => "-",
            _ => "",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);
    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }
    while let Some(&c) = chars.peek() {
        let span = Span { line, column };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump!();
            }
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&c) = chars.peek().filter(|c| c.is_ascii_alphanumeric() || **c == '_') {
                s.push(c);
                bump!();
            }
            Tok::Ident(s)
        } else if c.is_ascii_digit() {
            let digits = |chars: &mut std::iter::Peekable<std::str::Chars>, column: &mut usize| {
                let mut s = String::new();
                while let Some(&c) = chars.peek().filter(|c| c.is_ascii_digit()) {
                    s.push(c);
                    chars.next();
                    *column += 1;
                }
                s
            };
            let num: BigInt = digits(&mut chars, &mut column).parse().expect("digits");
            if chars.peek() == Some(&'/') {
                bump!();
                let den = digits(&mut chars, &mut column);
                if den.is_empty() {
                    return Err(Diagnostic::new(
                        DiagKind::Syntax,
                        span.line,
                        span.column,
                        "expected a denominator after `/`",
                    ));
                }
                let den: BigInt = den.parse().expect("digits");
                if den == BigInt::from(0) {
                    return Err(Diagnostic::new(DiagKind::Syntax, span.line, span.column, "zero denominator"));
                }
                Tok::Num(BigRational::new(num, den))
            } else {
                Tok::Num(BigRational::from_integer(num))
            }
        } else {
            let t = match c {
                ':' => Tok::Colon,
                ';' => Tok::Semi,
                '=' => Tok::Eq,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '+' => Tok::Plus,
                '*' => Tok::Star,
                '.' => Tok::Dot,
                '-' => Tok::Minus,
                other => {
                    return Err(Diagnostic::new(
                        DiagKind::Syntax,
                        line,
                        column,
                        format!("unexpected character `{other}`"),
                    ))
                }
            };
            bump!();
            t
        };
        out.push(Token { tok, span });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span { line, column },
    });
    Ok(out)
}
