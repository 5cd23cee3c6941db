//! Type-and-grade checking. Grades add up over subterms; only `knight`
//! contributes a grade of its own. Weakening is implicit.

use thiserror::Error;

use super::{Context, Expr, Type, TypedExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("`if` guard has type {found}, expected B")]
    GuardNotBool { found: Type },
    #[error("`{op}` expects a pair, found {found}")]
    NotAPair { op: &'static str, found: Type },
    #[error("`if` branches have different types: {then_ty} and {else_ty}")]
    BranchMismatch { then_ty: Type, else_ty: Type },
    #[error("cannot observe `{0}`: not in scope")]
    ObserveUnbound(String),
}

/// Derives `ctx ⊢ e : τ @ a`.
pub fn typecheck(e: &Expr, ctx: &Context) -> Result<TypedExpr, TypeError> {
    let (ty, grade) = infer(e, ctx)?;
    Ok(TypedExpr {
        expr: e.clone(),
        context: ctx.clone(),
        ty,
        grade,
    })
}

pub(crate) fn infer(e: &Expr, ctx: &Context) -> Result<(Type, usize), TypeError> {
    match e {
        Expr::Var(x) => ctx
            .lookup(x)
            .map(|t| (t.clone(), 0))
            .ok_or_else(|| TypeError::Unbound(x.clone())),
        Expr::Flip(_) => Ok((Type::Bool, 0)),
        Expr::Knight => Ok((Type::Bool, 1)),
        Expr::Pair(a, b) => {
            let (ta, ga) = infer(a, ctx)?;
            let (tb, gb) = infer(b, ctx)?;
            Ok((Type::prod(ta, tb), ga + gb))
        }
        Expr::Fst(inner) | Expr::Snd(inner) => {
            let op = if matches!(e, Expr::Fst(_)) { "fst" } else { "snd" };
            match infer(inner, ctx)? {
                (Type::Prod(l, r), g) => Ok((if op == "fst" { *l } else { *r }, g)),
                (found, _) => Err(TypeError::NotAPair { op, found }),
            }
        }
        Expr::If(g, t, f) => {
            let (tg, gg) = infer(g, ctx)?;
            if tg != Type::Bool {
                return Err(TypeError::GuardNotBool { found: tg });
            }
            let (tt, gt) = infer(t, ctx)?;
            let (tf, gf) = infer(f, ctx)?;
            if tt != tf {
                return Err(TypeError::BranchMismatch {
                    then_ty: tt,
                    else_ty: tf,
                });
            }
            Ok((tt, gg + gt + gf))
        }
        Expr::Let(x, bound, body) => {
            let (tb, gb) = infer(bound, ctx)?;
            let (ty, g) = infer(body, &ctx.extend(x, tb))?;
            Ok((ty, gb + g))
        }
        Expr::Observe(x) => ctx
            .lookup(x)
            .map(|t| (t.clone(), 0))
            .ok_or_else(|| TypeError::ObserveUnbound(x.clone())),
    }
}
