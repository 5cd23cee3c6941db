use impcirc_core::bimp::{eval, equal};
use impcirc_core::lang::{self, compile, mux, parse, typecheck, Context, Expr, Type};
use impcirc_core::suites::random::{self, ProgramBounds};
use impcirc_core::{Generator, GradedTerm, Profile, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn compilation_preserves_typing_on_random_programs() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let ctx = Context::new()
        .extend("a", Type::Bool)
        .extend("p", Type::prod(Type::Bool, Type::Bool));
    let bounds = ProgramBounds {
        depth: 3,
        max_knights: 3,
        observe: true,
    };
    for _ in 0..150 {
        let ty = random::small_type(&mut rng);
        let e = random::program(&mut rng, &ctx, &ty, &bounds);
        let te = typecheck(&e, &ctx).unwrap();
        let t = compile(&te);
        assert_eq!(
            t.profile().unwrap(),
            Profile::new(ctx.width(), te.ty.width(), te.grade),
            "{e}"
        );
        assert_eq!(parse(&e.to_string()).unwrap(), e);
    }
}

#[test]
fn mux_ignores_the_guard_when_branches_agree() {
    for n in 0..=2 {
        // (g, x) -> (g, x, x) -> mux
        let fed = GradedTerm::Id1
            .tensor(GradedTerm::copy_bundle(n))
            .then(mux(n));
        let expected = GradedTerm::gen(Generator::Del).tensor(GradedTerm::id(n));
        assert!(equal(&fed, &expected).unwrap(), "n = {n}");
    }
}

#[test]
fn observed_variable_keeps_only_true_runs() {
    let rep = lang::run("let x = flip 1/3 in let y = flip 1/2 in let _ = observe x in (x, y)").unwrap();
    let b = &rep.branches[0];
    assert_eq!(b.mass, Rational::new(1.into(), 3.into()));
    let n = b.normalized.as_ref().unwrap();
    assert_eq!(n["11"], Rational::new(1.into(), 2.into()));
    assert_eq!(n["10"], Rational::new(1.into(), 2.into()));
    assert_eq!(n["01"], Rational::from_integer(0.into()));
}

#[test]
fn knights_are_ordered_left_to_right() {
    // Grading bits: first knight, then second. Output is (first, second).
    let m = eval(&compile(&typecheck(&parse("(knight, knight)").unwrap(), &Context::new()).unwrap()))
        .unwrap();
    assert_eq!(m.grade(), 2);
    for (g, block) in m.blocks().iter().enumerate() {
        let column = block.column(0);
        assert_eq!(column[g], Rational::from_integer(1.into()));
    }
}

#[test]
fn hoisting_changes_the_grade() {
    let ctx = Context::new();
    let shared = typecheck(&parse("let x = knight in (x, x)").unwrap(), &ctx).unwrap();
    let separate = typecheck(&parse("(knight, knight)").unwrap(), &ctx).unwrap();
    assert_eq!((shared.grade, separate.grade), (1, 2));
    let w = impcirc_core::bimp::equal_up_to_regrading(&compile(&shared), &compile(&separate)).unwrap();
    assert!(w.is_none());
}

#[test]
fn json_report_is_stable() {
    let src = "let t = flip 0.5 in let s = flip 0.5 in let _ = observe (if knight then t else s) in (t, s)";
    let a = lang::run(src).unwrap().to_json_string();
    let b = lang::run(src).unwrap().to_json_string();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["grade"], 1);
    assert_eq!(v["branches"][0]["bits"], "1");
    assert_eq!(v["branches"][0]["normalized"]["11"], "1/2");
}

#[test]
fn expression_constructors_match_the_parser() {
    let e = Expr::let_("x", Expr::Knight, Expr::pair(Expr::var("x"), Expr::var("x")));
    assert_eq!(parse("let x = ◆ in (x, x)").unwrap(), e);
}
