use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiagKind {
    Syntax,
    UndeclaredName,
    DuplicateDefinition,
    MissingDefinition,
    DomainMismatch,
    UnknownBuiltin,
}

impl fmt::Display for DiagKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagKind::Syntax => "syntax error",
            DiagKind::UndeclaredName => "undeclared name",
            DiagKind::DuplicateDefinition => "duplicate definition",
            DiagKind::MissingDefinition => "missing definition",
            DiagKind::DomainMismatch => "domain mismatch",
            DiagKind::UnknownBuiltin => "unknown builtin",
        })
    }
}

/// A located problem in a source text. Lines and columns start at 1.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {kind}: {message}")]
pub struct Diagnostic {
    pub kind: DiagKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl Diagnostic {
    pub fn new(kind: DiagKind, line: usize, column: usize, message: impl Into<String>) -> Self {
        Diagnostic {
            kind,
            line,
            column,
            message: message.into(),
        }
    }
}
