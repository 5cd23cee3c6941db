//! A first-order probabilistic language with nondeterministic choice and
//! exact conditioning.
//!
//! ```text
//! e ::= x | flip p | knight | (e, e) | fst e | snd e
//!     | if e then e else e | let x = e in e | observe x
//! τ ::= B | τ ⊗ τ
//! ```
//!
//! Programs are type-and-grade checked, compiled to graded terms and
//! evaluated to one subdistribution per nondeterministic branch.

mod compile;
mod parser;
mod run;
mod typecheck;

use std::fmt;

use thiserror::Error;

use crate::bimp::BimpError;
use crate::stoch::Rational;

pub use compile::{compile, mux};
pub use parser::{parse, ParseError};
pub use run::{run, run_expr, run_with, Branch, RunReport};
pub use typecheck::{typecheck, TypeError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(String),
    Flip(Rational),
    Knight,
    Pair(Box<Expr>, Box<Expr>),
    Fst(Box<Expr>),
    Snd(Box<Expr>),
    If(Box<Expr>, Box<Expr>, Box<Expr>),
    Let(String, Box<Expr>, Box<Expr>),
    Observe(String),
}

impl Expr {
    pub fn var(x: &str) -> Self {
        Expr::Var(x.to_string())
    }

    pub fn pair(a: Expr, b: Expr) -> Self {
        Expr::Pair(Box::new(a), Box::new(b))
    }

    pub fn fst(e: Expr) -> Self {
        Expr::Fst(Box::new(e))
    }

    pub fn snd(e: Expr) -> Self {
        Expr::Snd(Box::new(e))
    }

    pub fn if_(g: Expr, t: Expr, e: Expr) -> Self {
        Expr::If(Box::new(g), Box::new(t), Box::new(e))
    }

    pub fn let_(x: &str, bound: Expr, body: Expr) -> Self {
        Expr::Let(x.to_string(), Box::new(bound), Box::new(body))
    }

    pub fn observe(x: &str) -> Self {
        Expr::Observe(x.to_string())
    }

    fn is_atomic(&self) -> bool {
        matches!(self, Expr::Var(_) | Expr::Knight | Expr::Pair(..))
    }

    pub fn uses_observe(&self) -> bool {
        match self {
            Expr::Observe(_) => true,
            Expr::Var(_) | Expr::Flip(_) | Expr::Knight => false,
            Expr::Fst(e) | Expr::Snd(e) => e.uses_observe(),
            Expr::Pair(a, b) | Expr::Let(_, a, b) => a.uses_observe() || b.uses_observe(),
            Expr::If(g, t, e) => g.uses_observe() || t.uses_observe() || e.uses_observe(),
        }
    }

    /// Whether `x` occurs free.
    pub fn mentions(&self, x: &str) -> bool {
        match self {
            Expr::Var(y) | Expr::Observe(y) => x == y,
            Expr::Flip(_) | Expr::Knight => false,
            Expr::Fst(e) | Expr::Snd(e) => e.mentions(x),
            Expr::Pair(a, b) => a.mentions(x) || b.mentions(x),
            Expr::Let(y, a, b) => a.mentions(x) || (y != x && b.mentions(x)),
            Expr::If(g, t, e) => g.mentions(x) || t.mentions(x) || e.mentions(x),
        }
    }
}

struct Arg<'a>(&'a Expr);

impl fmt::Display for Arg<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_atomic() {
            write!(f, "{}", self.0)
        } else {
            write!(f, "({})", self.0)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(x) => f.write_str(x),
            Expr::Flip(p) => write!(f, "flip {p}"),
            Expr::Knight => f.write_str("knight"),
            Expr::Pair(a, b) => write!(f, "({a}, {b})"),
            Expr::Fst(e) => write!(f, "fst {}", Arg(e)),
            Expr::Snd(e) => write!(f, "snd {}", Arg(e)),
            Expr::If(g, t, e) => write!(f, "if {g} then {t} else {e}"),
            Expr::Let(x, a, b) => write!(f, "let {x} = {a} in {b}"),
            Expr::Observe(x) => write!(f, "observe {x}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Type {
    Bool,
    Prod(Box<Type>, Box<Type>),
}

impl Type {
    pub fn prod(a: Type, b: Type) -> Self {
        Type::Prod(Box::new(a), Box::new(b))
    }

    /// Number of Boolean leaves, i.e. wires.
    pub fn width(&self) -> usize {
        match self {
            Type::Bool => 1,
            Type::Prod(a, b) => a.width() + b.width(),
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Bool => f.write_str("B"),
            Type::Prod(a, b) => {
                match **a {
                    Type::Prod(..) => write!(f, "({a})")?,
                    Type::Bool => write!(f, "{a}")?,
                }
                write!(f, " ⊗ ")?;
                match **b {
                    Type::Prod(..) => write!(f, "({b})"),
                    Type::Bool => write!(f, "{b}"),
                }
            }
        }
    }
}

/// Typed variables in declaration order; names are unique. Binding a name
/// that is already present drops the older binding.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Context {
    vars: Vec<(String, Type)>,
}

impl Context {
    pub fn new() -> Self {
        Context::default()
    }

    pub fn from_vars(vars: impl IntoIterator<Item = (String, Type)>) -> Self {
        vars.into_iter()
            .fold(Context::new(), |ctx, (x, t)| ctx.extend(&x, t))
    }

    pub fn extend(&self, name: &str, ty: Type) -> Context {
        let mut vars: Vec<(String, Type)> =
            self.vars.iter().filter(|(x, _)| x != name).cloned().collect();
        vars.push((name.to_string(), ty));
        Context { vars }
    }

    pub fn lookup(&self, name: &str) -> Option<&Type> {
        self.vars.iter().find(|(x, _)| x == name).map(|(_, t)| t)
    }

    pub fn width(&self) -> usize {
        self.vars.iter().map(|(_, t)| t.width()).sum()
    }

    pub fn vars(&self) -> &[(String, Type)] {
        &self.vars
    }

    /// Wire positions of `name`, if bound.
    pub fn wires_of(&self, name: &str) -> Option<std::ops::Range<usize>> {
        let mut start = 0;
        for (x, t) in &self.vars {
            if x == name {
                return Some(start..start + t.width());
            }
            start += t.width();
        }
        None
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, t)) in self.vars.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}: {t}")?;
        }
        Ok(())
    }
}

/// A typing judgement `context ⊢ expr : ty @ grade`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedExpr {
    pub expr: Expr,
    pub context: Context,
    pub ty: Type,
    pub grade: usize,
}

impl fmt::Display for TypedExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ⊢ {} : {} @ {}",
            self.context, self.expr, self.ty, self.grade
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LangError {
    #[error("syntax error: {0}")]
    Syntax(#[from] ParseError),
    #[error("type error: {0}")]
    Type(#[from] TypeError),
    #[error("evaluation error: {0}")]
    Eval(#[from] BimpError),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_shadowing() {
        let ctx = Context::new()
            .extend("x", Type::Bool)
            .extend("y", Type::prod(Type::Bool, Type::Bool))
            .extend("x", Type::Bool);
        assert_eq!(ctx.vars().len(), 2);
        assert_eq!(ctx.wires_of("y"), Some(0..2));
        assert_eq!(ctx.wires_of("x"), Some(2..3));
        assert_eq!(ctx.width(), 3);
        assert_eq!(ctx.to_string(), "y: B ⊗ B, x: B");
    }

    #[test]
    fn widths() {
        let t = Type::prod(Type::Bool, Type::prod(Type::Bool, Type::Bool));
        assert_eq!(t.width(), 3);
        assert_eq!(t.to_string(), "B ⊗ (B ⊗ B)");
    }

    #[test]
    fn free_variables() {
        let e = Expr::let_("x", Expr::var("y"), Expr::pair(Expr::var("x"), Expr::observe("z")));
        assert!(e.mentions("y"));
        assert!(e.mentions("z"));
        assert!(!e.mentions("x"));
        assert!(e.uses_observe());
    }
}
