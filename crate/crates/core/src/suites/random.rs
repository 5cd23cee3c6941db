//! Seeded generators of random terms, injections and programs.

use rand::seq::index::sample;
use rand::Rng;

use crate::grading::Injection;
use crate::lang::{Context, Expr, Type};
use crate::stoch::Rational;
use crate::terms::{Generator, GradedTerm};

/// Shape bounds for generated terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    /// Largest arity, coarity and intermediate wire count.
    pub max_wires: usize,
    pub max_grade: usize,
    pub depth: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_wires: 6,
            max_grade: 3,
            depth: 3,
        }
    }
}

/// A probability with a small denominator, so that exact arithmetic stays cheap.
pub fn probability(rng: &mut impl Rng) -> Rational {
    let den: i64 = [1, 2, 3, 4, 5, 6, 8][rng.gen_range(0..7)];
    let num = rng.gen_range(0..=den);
    Rational::new(num.into(), den.into())
}

/// A uniformly random injection `[cod] -> [dom]`, i.e. a grading morphism
/// `dom -> cod`. Needs `cod <= dom`.
pub fn injection(rng: &mut impl Rng, dom: usize, cod: usize) -> Injection {
    let map = sample(rng, dom, cod).into_vec();
    Injection::new(dom, map).expect("sampled indices are distinct and in range")
}

/// A random 0-graded circuit `n -> m` over `del`, `copy`, `and`, `not`,
/// `state(p)`, `cond` and the structural terms.
pub fn plain_term(rng: &mut impl Rng, n: usize, m: usize, bounds: &Bounds) -> GradedTerm {
    plain(rng, n, m, bounds.depth, bounds.max_wires)
}

fn plain(rng: &mut impl Rng, n: usize, m: usize, depth: usize, max_wires: usize) -> GradedTerm {
    if depth == 0 || rng.gen_bool(0.3) {
        return plain_base(rng, n, m);
    }
    if rng.gen_bool(0.6) {
        let k = rng.gen_range(0..=max_wires);
        GradedTerm::seq(
            plain(rng, n, k, depth - 1, max_wires),
            plain(rng, k, m, depth - 1, max_wires),
        )
    } else {
        let n1 = rng.gen_range(0..=n);
        let m1 = rng.gen_range(0..=m);
        GradedTerm::par(
            plain(rng, n1, m1, depth - 1, max_wires),
            plain(rng, n - n1, m - m1, depth - 1, max_wires),
        )
    }
}

fn pick<T: Clone>(rng: &mut impl Rng, options: &[T]) -> T {
    options[rng.gen_range(0..options.len())].clone()
}

fn plain_base(rng: &mut impl Rng, n: usize, m: usize) -> GradedTerm {
    use Generator::*;
    match (n, m) {
        (0, 0) => GradedTerm::Id0,
        (0, 1) => GradedTerm::state(probability(rng)),
        (1, 0) => GradedTerm::gen(Del),
        (1, 1) => pick(rng, &[GradedTerm::Id1, GradedTerm::gen(Not)]),
        (1, 2) => GradedTerm::gen(Copy),
        (2, 1) => pick(rng, &[GradedTerm::gen(And), GradedTerm::gen(Cond)]),
        (2, 2) => pick(rng, &[GradedTerm::Swap, GradedTerm::id(2)]),
        _ => loop {
            let n1 = rng.gen_range(0..=n.min(2));
            let m1 = rng.gen_range(0..=m.min(2));
            if (n1, m1) != (0, 0) && (n1, m1) != (n, m) {
                break GradedTerm::par(plain_base(rng, n1, m1), plain_base(rng, n - n1, m - m1));
            }
        },
    }
}

/// A random term `n ->_g m` of exactly grade `g`.
pub fn graded_term(rng: &mut impl Rng, n: usize, m: usize, g: usize, bounds: &Bounds) -> GradedTerm {
    graded(rng, n, m, g, bounds.depth, bounds.max_wires)
}

/// A random term `n -> m` of grade at most `bounds.max_grade`.
pub fn term(rng: &mut impl Rng, n: usize, m: usize, bounds: &Bounds) -> GradedTerm {
    let g = rng.gen_range(0..=bounds.max_grade);
    graded_term(rng, n, m, g, bounds)
}

fn graded(
    rng: &mut impl Rng,
    n: usize,
    m: usize,
    g: usize,
    depth: usize,
    max_wires: usize,
) -> GradedTerm {
    if g == 0 && rng.gen_bool(0.5) {
        return plain(rng, n, m, depth, max_wires);
    }
    if depth == 0 || rng.gen_bool(0.25) {
        return graded_base(rng, n, m, g, max_wires);
    }
    match rng.gen_range(0..3) {
        0 => {
            let k = rng.gen_range(0..=max_wires);
            let g1 = rng.gen_range(0..=g);
            GradedTerm::seq(
                graded(rng, n, k, g1, depth - 1, max_wires),
                graded(rng, k, m, g - g1, depth - 1, max_wires),
            )
        }
        1 => {
            let n1 = rng.gen_range(0..=n);
            let m1 = rng.gen_range(0..=m);
            let g1 = rng.gen_range(0..=g);
            GradedTerm::par(
                graded(rng, n1, m1, g1, depth - 1, max_wires),
                graded(rng, n - n1, m - m1, g - g1, depth - 1, max_wires),
            )
        }
        _ => {
            let a = rng.gen_range(0..=g);
            let inner = graded(rng, n, m, a, depth - 1, max_wires);
            GradedTerm::regrade(injection(rng, g, a), inner)
        }
    }
}

/// `t ⊲ ((id_n ⊗ knight^a) ; c)` with `c` a plain circuit and `t: g -> a`.
fn graded_base(rng: &mut impl Rng, n: usize, m: usize, g: usize, max_wires: usize) -> GradedTerm {
    if (n, m, g) == (0, 1, 1) && rng.gen_bool(0.5) {
        return GradedTerm::knight();
    }
    let a = rng.gen_range(0..=g);
    let body = GradedTerm::seq(
        GradedTerm::par(GradedTerm::id(n), GradedTerm::knights(a)),
        plain(rng, n + a, m, 1, max_wires),
    );
    if a == g && rng.gen_bool(0.5) {
        body
    } else {
        GradedTerm::regrade(injection(rng, g, a), body)
    }
}

/// Options for random programs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProgramBounds {
    pub depth: usize,
    /// Largest number of knights in one generated expression.
    pub max_knights: usize,
    pub observe: bool,
}

impl Default for ProgramBounds {
    fn default() -> Self {
        ProgramBounds {
            depth: 2,
            max_knights: 2,
            observe: false,
        }
    }
}

/// A random small type: `B` or `B ⊗ B`.
pub fn small_type(rng: &mut impl Rng) -> Type {
    if rng.gen_bool(0.75) {
        Type::Bool
    } else {
        Type::prod(Type::Bool, Type::Bool)
    }
}

/// A random well-typed expression `ctx ⊢ e : ty`.
pub fn program(rng: &mut impl Rng, ctx: &Context, ty: &Type, bounds: &ProgramBounds) -> Expr {
    let mut knights = bounds.max_knights;
    let mut fresh = 0;
    expr(rng, ctx, ty, bounds.depth, bounds.observe, &mut knights, &mut fresh)
}

fn vars_of(ctx: &Context, ty: &Type) -> Vec<String> {
    ctx.vars()
        .iter()
        .filter(|(x, t)| t == ty && x != "_")
        .map(|(x, _)| x.clone())
        .collect()
}

fn leaf(rng: &mut impl Rng, ctx: &Context, ty: &Type, observe: bool, knights: &mut usize) -> Expr {
    let vars = vars_of(ctx, ty);
    if !vars.is_empty() && rng.gen_bool(0.5) {
        let x = pick(rng, &vars);
        return if observe && rng.gen_bool(0.3) {
            Expr::Observe(x)
        } else {
            Expr::Var(x)
        };
    }
    match ty {
        Type::Bool => {
            if *knights > 0 && rng.gen_bool(0.3) {
                *knights -= 1;
                Expr::Knight
            } else {
                Expr::Flip(probability(rng))
            }
        }
        Type::Prod(a, b) => Expr::pair(
            leaf(rng, ctx, a, observe, knights),
            leaf(rng, ctx, b, observe, knights),
        ),
    }
}

fn expr(
    rng: &mut impl Rng,
    ctx: &Context,
    ty: &Type,
    depth: usize,
    observe: bool,
    knights: &mut usize,
    fresh: &mut usize,
) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return leaf(rng, ctx, ty, observe, knights);
    }
    match rng.gen_range(0..5) {
        0 | 1 => {
            let name = format!("v{fresh}");
            *fresh += 1;
            let bound_ty = small_type(rng);
            let bound = expr(rng, ctx, &bound_ty, depth - 1, observe, knights, fresh);
            let inner = ctx.extend(&name, bound_ty);
            let body = expr(rng, &inner, ty, depth - 1, observe, knights, fresh);
            Expr::let_(&name, bound, body)
        }
        2 => Expr::if_(
            expr(rng, ctx, &Type::Bool, depth - 1, observe, knights, fresh),
            expr(rng, ctx, ty, depth - 1, observe, knights, fresh),
            expr(rng, ctx, ty, depth - 1, observe, knights, fresh),
        ),
        3 => match ty {
            Type::Prod(a, b) => Expr::pair(
                expr(rng, ctx, a, depth - 1, observe, knights, fresh),
                expr(rng, ctx, b, depth - 1, observe, knights, fresh),
            ),
            Type::Bool => {
                let other = Type::Bool;
                let (pair_ty, first) = if rng.gen_bool(0.5) {
                    (Type::prod(ty.clone(), other), true)
                } else {
                    (Type::prod(other, ty.clone()), false)
                };
                let e = expr(rng, ctx, &pair_ty, depth - 1, observe, knights, fresh);
                if first {
                    Expr::fst(e)
                } else {
                    Expr::snd(e)
                }
            }
        },
        _ => leaf(rng, ctx, ty, observe, knights),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::typecheck;
    use crate::terms::Profile;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn terms_have_requested_profiles() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let bounds = Bounds::default();
        for _ in 0..200 {
            let n = rng.gen_range(0..=4);
            let m = rng.gen_range(0..=4);
            let g = rng.gen_range(0..=3);
            let t = graded_term(&mut rng, n, m, g, &bounds);
            assert_eq!(t.profile().unwrap(), Profile::new(n, m, g), "{t}");
            let p = plain_term(&mut rng, n, m, &bounds);
            assert_eq!(p.profile().unwrap(), Profile::new(n, m, 0));
            assert!(!p.contains_regrade());
            assert_eq!(p.count_generators(&|g| *g == Generator::Knight), 0);
        }
    }

    #[test]
    fn injections_are_uniformly_shaped() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let dom = rng.gen_range(0..6);
            let cod = rng.gen_range(0..=dom);
            let t = injection(&mut rng, dom, cod);
            assert_eq!((t.dom_grade(), t.cod_grade()), (dom, cod));
        }
    }

    #[test]
    fn programs_are_well_typed() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ctx = Context::new().extend("z", Type::Bool);
        let bounds = ProgramBounds {
            observe: true,
            ..ProgramBounds::default()
        };
        for _ in 0..200 {
            let ty = small_type(&mut rng);
            let e = program(&mut rng, &ctx, &ty, &bounds);
            let te = typecheck(&e, &ctx).unwrap();
            assert_eq!(te.ty, ty);
            assert!(te.grade <= bounds.max_knights);
        }
    }

    #[test]
    fn deterministic_for_a_seed() {
        let gen = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            term(&mut rng, 2, 2, &Bounds::default())
        };
        assert_eq!(gen(11), gen(11));
    }
}
