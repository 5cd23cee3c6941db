//! Compilation of typed programs to graded terms.
//!
//! A judgement `Γ ⊢ e : τ @ a` becomes a term `|Γ| ->_a |τ|`. Context wires
//! follow declaration order. Grading wires follow the order of the grade sums
//! in the typing rules: a pair's first component before its second, an `if`
//! guard before its branches.

use super::typecheck::infer;
use super::{Context, Expr, Type, TypedExpr};
use crate::grading::Injection;
use crate::stoch::Rational;
use crate::terms::{Generator, GradedTerm};

/// # Panics
///
/// If `te` is not a valid typing judgement, i.e. did not come from
/// [`typecheck`](super::typecheck).
pub fn compile(te: &TypedExpr) -> GradedTerm {
    go(&te.expr, &te.context).0
}

fn ty_of(e: &Expr, ctx: &Context) -> Type {
    infer(e, ctx).expect("compile needs a well-typed expression").0
}

/// Circuit `|Γ| -> |x|` keeping only `x`'s wires.
fn project(ctx: &Context, x: &str) -> GradedTerm {
    let wires = ctx.wires_of(x).expect("compile needs a well-typed expression");
    let t = Injection::new(ctx.width(), wires.collect()).expect("wires lie within the context");
    GradedTerm::injection_circuit(&t)
}

fn go(e: &Expr, ctx: &Context) -> (GradedTerm, Type) {
    let w = ctx.width();
    match e {
        Expr::Var(x) => (project(ctx, x), ty_of(e, ctx)),
        Expr::Flip(p) => (
            GradedTerm::dels(w).then(GradedTerm::state(p.clone())),
            Type::Bool,
        ),
        Expr::Knight => (GradedTerm::dels(w).then(GradedTerm::knight()), Type::Bool),
        Expr::Pair(a, b) => {
            let (ca, ta) = go(a, ctx);
            let (cb, tb) = go(b, ctx);
            (
                GradedTerm::copy_bundle(w).then(ca.tensor(cb)),
                Type::prod(ta, tb),
            )
        }
        Expr::Fst(inner) | Expr::Snd(inner) => {
            let (c, t) = go(inner, ctx);
            let Type::Prod(l, r) = t else {
                panic!("compile needs a well-typed expression");
            };
            if matches!(e, Expr::Fst(_)) {
                let keep = GradedTerm::id(l.width()).tensor(GradedTerm::dels(r.width()));
                (c.then(keep), *l)
            } else {
                let keep = GradedTerm::dels(l.width()).tensor(GradedTerm::id(r.width()));
                (c.then(keep), *r)
            }
        }
        Expr::Let(x, bound, body) => {
            let (cb, tb) = go(bound, ctx);
            let inner = ctx.extend(x, tb.clone());
            // (Γ, τ1) -> Γ' where Γ' drops a shadowed `x`.
            let shadow = match ctx.wires_of(x) {
                Some(old) => {
                    let keep: Vec<usize> = (0..w + tb.width()).filter(|i| !old.contains(i)).collect();
                    let t = Injection::new(w + tb.width(), keep).expect("valid projection");
                    GradedTerm::injection_circuit(&t)
                }
                None => GradedTerm::id(w + tb.width()),
            };
            let (c, t) = go(body, &inner);
            (
                GradedTerm::copy_bundle(w)
                    .then(GradedTerm::id(w).tensor(cb))
                    .then(shadow)
                    .then(c),
                t,
            )
        }
        Expr::If(g, a, b) => {
            let (cg, _) = go(g, ctx);
            let (ca, t) = go(a, ctx);
            let (cb, _) = go(b, ctx);
            (
                GradedTerm::copy_bundle_k(w, 3)
                    .then(cg.tensor(ca).tensor(cb))
                    .then(mux(t.width())),
                t,
            )
        }
        Expr::Observe(x) => {
            let t = ty_of(e, ctx);
            let one = Rational::from_integer(1.into());
            let check = GradedTerm::tensor_all((0..t.width()).map(|_| {
                GradedTerm::Id1
                    .tensor(GradedTerm::state(one.clone()))
                    .then(GradedTerm::gen(Generator::Cond))
            }));
            (project(ctx, x).then(check), t)
        }
    }
}

/// `or = (not ⊗ not) ; and ; not`.
fn or() -> GradedTerm {
    GradedTerm::gen(Generator::Not)
        .tensor(GradedTerm::gen(Generator::Not))
        .then(GradedTerm::gen(Generator::And))
        .then(GradedTerm::gen(Generator::Not))
}

/// `(g, x, y) -> or(and(g, x), and(not g, y))`.
fn mux1() -> GradedTerm {
    let and = || GradedTerm::gen(Generator::And);
    GradedTerm::gen(Generator::Copy)
        .tensor(GradedTerm::id(2))
        .then(GradedTerm::permutation(&[0, 2, 1, 3]))
        .then(and().tensor(GradedTerm::gen(Generator::Not).tensor(GradedTerm::Id1).then(and())))
        .then(or())
}

/// Multiplexer `1 + n + n -> n`: the guard, then the `n` wires chosen when
/// it is true, then the `n` wires chosen when it is false.
pub fn mux(n: usize) -> GradedTerm {
    if n == 0 {
        return GradedTerm::gen(Generator::Del);
    }
    // Regroup (g_1..g_n, x_1..x_n, y_1..y_n) as (g_i, x_i, y_i) triples.
    let perm: Vec<usize> = (0..n).flat_map(|i| [i, n + i, 2 * n + i]).collect();
    GradedTerm::copies(n)
        .tensor(GradedTerm::id(2 * n))
        .then(GradedTerm::permutation(&perm))
        .then(GradedTerm::tensor_all((0..n).map(|_| mux1())))
}
