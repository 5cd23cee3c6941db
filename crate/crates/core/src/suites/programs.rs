//! The let-laws of the language: associativity, commutativity and weakening
//! hold up to regrading for observe-free programs; with `observe`,
//! weakening breaks. Hoisting a knight out of a `let` changes the grade.

use rand::Rng;

use super::random::{self, ProgramBounds};
use super::{rng, Check, SuiteReport};
use crate::bimp::{equal_up_to_regrading, RegradingWitness};
use crate::lang::{compile, parse, typecheck, Context, Expr, Type};
use crate::terms::GradedTerm;

/// `let x = t in let y = u in v`, its reassociation and its reordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple {
    pub context: Context,
    pub t: Expr,
    pub u: Expr,
    pub v: Expr,
    /// `u` and `v` for the associativity law: `u` may use `x`, `v` may not.
    pub u_assoc: Expr,
    pub v_assoc: Expr,
}

impl Triple {
    pub fn random(rng: &mut impl Rng, bounds: &ProgramBounds) -> Triple {
        let context = if rng.gen_bool(0.5) {
            Context::new().extend("z", Type::Bool)
        } else {
            Context::new()
        };
        let (tt, tu, tv) = (Type::Bool, Type::Bool, random::small_type(rng));
        let t = random::program(rng, &context, &tt, bounds);
        let u = random::program(rng, &context, &tu, bounds);
        let both = context.extend("x", tt.clone()).extend("y", tu.clone());
        let v = random::program(rng, &both, &tv, bounds);
        let u_assoc = random::program(rng, &context.extend("x", tt), &tu, bounds);
        let v_assoc = random::program(rng, &context.extend("y", tu), &tv, bounds);
        Triple {
            context,
            t,
            u,
            v,
            u_assoc,
            v_assoc,
        }
    }

    pub fn associativity(&self) -> (Expr, Expr) {
        let (t, u, v) = (&self.t, &self.u_assoc, &self.v_assoc);
        (
            Expr::let_("x", t.clone(), Expr::let_("y", u.clone(), v.clone())),
            Expr::let_("y", Expr::let_("x", t.clone(), u.clone()), v.clone()),
        )
    }

    pub fn commutativity(&self) -> (Expr, Expr) {
        let (t, u, v) = (&self.t, &self.u, &self.v);
        (
            Expr::let_("x", t.clone(), Expr::let_("y", u.clone(), v.clone())),
            Expr::let_("y", u.clone(), Expr::let_("x", t.clone(), v.clone())),
        )
    }

    pub fn weakening(&self) -> (Expr, Expr) {
        (Expr::let_("x", self.t.clone(), self.u.clone()), self.u.clone())
    }
}

/// Compiles both programs under `ctx` and searches for a regrading witness.
pub fn related(ctx: &Context, lhs: &Expr, rhs: &Expr) -> Result<Option<RegradingWitness>, String> {
    let compile_in = |e: &Expr| -> Result<GradedTerm, String> {
        typecheck(e, ctx).map(|te| compile(&te)).map_err(|err| format!("{e}: {err}"))
    };
    let l = compile_in(lhs)?;
    let r = compile_in(rhs)?;
    equal_up_to_regrading(&l, &r).map_err(|e| e.to_string())
}

fn record_law(check: &mut Check, ctx: &Context, (lhs, rhs): (Expr, Expr), expect: bool) {
    match related(ctx, &lhs, &rhs) {
        Ok(w) => check.record(w.is_some() == expect, || {
            format!("[{ctx}] {lhs}  vs  {rhs}")
        }),
        Err(e) => check.fail(e),
    }
}

/// The weakening counterexample: a discarded `let` that conditions.
pub const WEAKENING_COUNTEREXAMPLE: (&str, &str) =
    ("let x = (let z = flip 0.5 in observe z) in flip 1", "flip 1");

/// Hoisting a shared knight: grades 1 and 2.
pub const HOISTING: (&str, &str) = ("let x = knight in (x, x)", "(knight, knight)");

fn fixed_pair(check: &mut Check, (l, r): (&str, &str), expect: bool) {
    let (lhs, rhs) = (parse(l).expect("fixed program parses"), parse(r).expect("fixed program parses"));
    record_law(check, &Context::new(), (lhs, rhs), expect);
}

/// Theorem-style let-laws on `count` random triples, with and without
/// `observe`, and the fixed negative instances.
pub fn let_laws(seed: u64, count: usize) -> SuiteReport {
    let mut checks = Vec::new();
    for (observe, suffix) in [(false, ""), (true, "+obs")] {
        let mut rng = rng(seed.wrapping_add(400 + observe as u64));
        let bounds = ProgramBounds {
            observe,
            ..ProgramBounds::default()
        };
        let mut assoc = Check::new(format!("ASSOC{suffix}"), "let associativity up to regrading");
        let mut comm = Check::new(format!("COMM{suffix}"), "let commutativity up to regrading");
        let mut weak = Check::new("WEAK", "let weakening up to regrading");
        for _ in 0..count {
            let triple = Triple::random(&mut rng, &bounds);
            record_law(&mut assoc, &triple.context, triple.associativity(), true);
            record_law(&mut comm, &triple.context, triple.commutativity(), true);
            if !observe {
                record_law(&mut weak, &triple.context, triple.weakening(), true);
            }
        }
        checks.push(assoc);
        checks.push(comm);
        if !observe {
            checks.push(weak);
        }
    }
    if count > 0 {
        let mut weak_obs = Check::new("WEAK-neg", "weakening fails for a conditioning let");
        fixed_pair(&mut weak_obs, WEAKENING_COUNTEREXAMPLE, false);
        let mut hoist = Check::new("HOIST-neg", "hoisting a knight has no regrading witness");
        fixed_pair(&mut hoist, HOISTING, false);
        checks.push(weak_obs);
        checks.push(hoist);
    }
    SuiteReport {
        suite: "let laws".into(),
        checks,
    }
}
