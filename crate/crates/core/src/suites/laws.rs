//! Laws of graded symmetric monoidal categories (G1-G11), the failure of
//! plain interchange, factorization round trips, sliding and conservativity.

use rand::Rng;

use super::random::{self, Bounds};
use super::{record_eq, rng, Check, SuiteReport};
use crate::bimp::{eval, eval_plain, Evaluator};
use crate::grading::Injection;
use crate::normalform::factorize;
use crate::terms::GradedTerm;

/// Splits `total` into `parts` random summands.
fn split(rng: &mut impl Rng, total: usize, parts: usize) -> Vec<usize> {
    let mut out = vec![0; parts];
    for _ in 0..total {
        out[rng.gen_range(0..parts)] += 1;
    }
    out
}

fn wires(rng: &mut impl Rng, b: &Bounds) -> usize {
    rng.gen_range(0..=b.max_wires)
}

/// Two wire counts whose sum stays within the bound.
fn wire_pair(rng: &mut impl Rng, b: &Bounds) -> (usize, usize) {
    let total = rng.gen_range(0..=b.max_wires);
    let first = rng.gen_range(0..=total);
    (first, total - first)
}

fn grades(rng: &mut impl Rng, b: &Bounds, parts: usize) -> Vec<usize> {
    let total = rng.gen_range(0..=b.max_grade);
    split(rng, total, parts)
}

type Instance = Vec<(GradedTerm, GradedTerm)>;

fn g1(rng: &mut impl Rng, b: &Bounds) -> Instance {
    let (n, k, l, m) = (wires(rng, b), wires(rng, b), wires(rng, b), wires(rng, b));
    let gs = grades(rng, b, 3);
    let f = random::graded_term(rng, n, k, gs[0], b);
    let g = random::graded_term(rng, k, l, gs[1], b);
    let h = random::graded_term(rng, l, m, gs[2], b);
    vec![(
        GradedTerm::seq(GradedTerm::seq(f.clone(), g.clone()), h.clone()),
        GradedTerm::seq(f, GradedTerm::seq(g, h)),
    )]
}

fn g2(rng: &mut impl Rng, b: &Bounds) -> Instance {
    let (n, m) = (wires(rng, b), wires(rng, b));
    let f = random::term(rng, n, m, b);
    vec![
        (GradedTerm::seq(GradedTerm::id(n), f.clone()), f.clone()),
        (GradedTerm::seq(f.clone(), GradedTerm::id(m)), f),
    ]
}

fn g3(rng: &mut impl Rng, b: &Bounds) -> Instance {
    let (wn, wm) = (wires(rng, b), wires(rng, b));
    let ns = split(rng, wn, 3);
    let ms = split(rng, wm, 3);
    let gs = grades(rng, b, 3);
    let f = random::graded_term(rng, ns[0], ms[0], gs[0], b);
    let g = random::graded_term(rng, ns[1], ms[1], gs[1], b);
    let h = random::graded_term(rng, ns[2], ms[2], gs[2], b);
    vec![(
        GradedTerm::par(GradedTerm::par(f.clone(), g.clone()), h.clone()),
        GradedTerm::par(f, GradedTerm::par(g, h)),
    )]
}

fn g4(rng: &mut impl Rng, b: &Bounds) -> Instance {
    let (n, m) = (wires(rng, b), wires(rng, b));
    let f = random::term(rng, n, m, b);
    vec![
        (GradedTerm::par(GradedTerm::Id0, f.clone()), f.clone()),
        (GradedTerm::par(f.clone(), GradedTerm::Id0), f),
    ]
}

/// Regraded pair: `(t ⊲ f, t' ⊲ g, t ⊗ t', f, g)` with `f: n -> k`, `g: k2 -> m`.
fn regraded_pair(
    rng: &mut impl Rng,
    b: &Bounds,
    (n, k): (usize, usize),
    (k2, m): (usize, usize),
) -> (Injection, Injection, GradedTerm, GradedTerm) {
    let outer = grades(rng, b, 2);
    let a = rng.gen_range(0..=outer[0]);
    let c = rng.gen_range(0..=outer[1]);
    let t = random::injection(rng, outer[0], a);
    let t2 = random::injection(rng, outer[1], c);
    let f = random::graded_term(rng, n, k, a, b);
    let g = random::graded_term(rng, k2, m, c, b);
    (t, t2, f, g)
}

fn g5(rng: &mut impl Rng, b: &Bounds) -> Instance {
    let (n, k, m) = (wires(rng, b), wires(rng, b), wires(rng, b));
    let (t, t2, f, g) = regraded_pair(rng, b, (n, k), (k, m));
    vec![(
        GradedTerm::seq(
            GradedTerm::regrade(t.clone(), f.clone()),
            GradedTerm::regrade(t2.clone(), g.clone()),
        ),
        GradedTerm::regrade(t.tensor(&t2), GradedTerm::seq(f, g)),
    )]
}

fn g6(rng: &mut impl Rng, b: &Bounds) -> Instance {
    let (n, n2) = wire_pair(rng, b);
    let (m, m2) = wire_pair(rng, b);
    let (t, t2, f, g) = regraded_pair(rng, b, (n, m), (n2, m2));
    vec![(
        GradedTerm::par(
            GradedTerm::regrade(t.clone(), f.clone()),
            GradedTerm::regrade(t2.clone(), g.clone()),
        ),
        GradedTerm::regrade(t.tensor(&t2), GradedTerm::par(f, g)),
    )]
}

fn g7(rng: &mut impl Rng, b: &Bounds) -> Instance {
    let (n, m) = (wires(rng, b), wires(rng, b));
    let c = rng.gen_range(0..=b.max_grade);
    let bb = rng.gen_range(0..=c);
    let a = rng.gen_range(0..=bb);
    let s = random::injection(rng, c, bb);
    let t = random::injection(rng, bb, a);
    let f = random::graded_term(rng, n, m, a, b);
    let st = s.compose(&t).expect("codomain of s is the domain of t");
    vec![(
        GradedTerm::regrade(s, GradedTerm::regrade(t, f.clone())),
        GradedTerm::regrade(st, f),
    )]
}

fn g8(rng: &mut impl Rng, b: &Bounds) -> Instance {
    let (n, m) = (wires(rng, b), wires(rng, b));
    let f = random::term(rng, n, m, b);
    let a = f.profile().expect("generated terms are valid").grade;
    vec![(GradedTerm::regrade(Injection::identity(a), f.clone()), f)]
}

/// Interchange `(f ⊗ f') ; (g ⊗ g')` and its regraded right-hand side.
fn interchange(
    f: &GradedTerm,
    f2: &GradedTerm,
    g: &GradedTerm,
    g2: &GradedTerm,
) -> (GradedTerm, GradedTerm, GradedTerm) {
    let grade = |t: &GradedTerm| t.profile().expect("generated terms are valid").grade;
    let (a, a2, bb, b2) = (grade(f), grade(f2), grade(g), grade(g2));
    let lhs = GradedTerm::seq(
        GradedTerm::par(f.clone(), f2.clone()),
        GradedTerm::par(g.clone(), g2.clone()),
    );
    let plain = GradedTerm::par(
        GradedTerm::seq(f.clone(), g.clone()),
        GradedTerm::seq(f2.clone(), g2.clone()),
    );
    let sigma = Injection::identity(a)
        .tensor(&Injection::symmetry(a2, bb))
        .tensor(&Injection::identity(b2));
    let rhs = GradedTerm::regrade(sigma, plain.clone());
    (lhs, rhs, plain)
}

fn g9(rng: &mut impl Rng, b: &Bounds) -> Instance {
    let (n, n2) = wire_pair(rng, b);
    let (k, k2) = wire_pair(rng, b);
    let (m, m2) = wire_pair(rng, b);
    let gs = grades(rng, b, 4);
    let f = random::graded_term(rng, n, k, gs[0], b);
    let f2 = random::graded_term(rng, n2, k2, gs[1], b);
    let g = random::graded_term(rng, k, m, gs[2], b);
    let g2 = random::graded_term(rng, k2, m2, gs[3], b);
    let (lhs, rhs, _) = interchange(&f, &f2, &g, &g2);
    vec![(lhs, rhs)]
}

fn g10(rng: &mut impl Rng, b: &Bounds) -> Instance {
    let (n, m) = wire_pair(rng, b);
    let k = wires(rng, b);
    let gs = grades(rng, b, 2);
    let f = random::graded_term(rng, k, n + m, gs[0] + gs[1], b);
    let twice = GradedTerm::seq(GradedTerm::swap_block(n, m), GradedTerm::swap_block(m, n));
    let regraded = GradedTerm::regrade(
        Injection::symmetry(gs[0], gs[1]),
        GradedTerm::regrade(Injection::symmetry(gs[1], gs[0]), f.clone()),
    );
    vec![
        (GradedTerm::seq(f.clone(), twice), f.clone()),
        (regraded, f),
    ]
}

fn g11(rng: &mut impl Rng, b: &Bounds) -> Instance {
    let (n, n2) = wire_pair(rng, b);
    let (m, m2) = wire_pair(rng, b);
    let gs = grades(rng, b, 2);
    let f = random::graded_term(rng, n, m, gs[0], b);
    let g = random::graded_term(rng, n2, m2, gs[1], b);
    let lhs = GradedTerm::seq(GradedTerm::swap_block(n2, n), GradedTerm::par(f.clone(), g.clone()));
    let rhs = GradedTerm::regrade(
        Injection::symmetry(gs[0], gs[1]),
        GradedTerm::seq(GradedTerm::par(g, f), GradedTerm::swap_block(m2, m)),
    );
    vec![(lhs, rhs)]
}

type Law = fn(&mut rand_chacha::ChaCha8Rng, &Bounds) -> Instance;

pub const LAWS: [(&str, &str, Law); 11] = [
    ("G1", "sequential composition is associative", g1),
    ("G2", "identities are units for sequential composition", g2),
    ("G3", "parallel composition is associative", g3),
    ("G4", "id0 is a unit for parallel composition", g4),
    ("G5", "regrading is natural for sequential composition", g5),
    ("G6", "regrading is natural for parallel composition", g6),
    ("G7", "regrading by s after t is regrading by s;t", g7),
    ("G8", "regrading by the identity does nothing", g8),
    ("G9", "interchange holds up to the symmetry regrading", g9),
    ("G10", "symmetries are involutions", g10),
    ("G11", "sliding through a symmetry holds up to regrading", g11),
];

/// G1-G11 on `count` random instances each, plus a search for an instance
/// where interchange fails without regrading.
pub fn graded_laws(seed: u64, count: usize, bounds: &Bounds) -> SuiteReport {
    let ev = Evaluator::default();
    let mut checks = Vec::new();
    for (i, (name, description, law)) in LAWS.iter().enumerate() {
        let mut rng = rng(seed.wrapping_add(i as u64));
        let mut check = Check::new(*name, *description);
        for _ in 0..count {
            let pairs = law(&mut rng, bounds);
            let mut all = true;
            let mut shown = String::new();
            for (lhs, rhs) in &pairs {
                match super::same(&ev, lhs, rhs) {
                    Ok(true) => {}
                    Ok(false) => {
                        all = false;
                        shown = format!("{lhs}  vs  {rhs}");
                    }
                    Err(e) => {
                        all = false;
                        shown = format!("{lhs}  vs  {rhs}: {e}");
                    }
                }
            }
            check.record(all, || shown);
        }
        checks.push(check);
    }
    checks.push(interchange_failure(seed, count));
    SuiteReport {
        suite: "graded monoidal laws".into(),
        checks,
    }
}

/// Searches for `f, f', g, g'` of grades `0, 1, 1, 0` such that
/// `(f ⊗ f') ; (g ⊗ g')` differs from `(f ; g) ⊗ (f' ; g')`. Passes once one
/// is found; the instance is kept in `description`.
pub fn interchange_failure(seed: u64, attempts: usize) -> Check {
    let mut check = Check::new("G9-neg", "interchange fails without regrading");
    if attempts == 0 {
        return check;
    }
    let mut rng = rng(seed ^ 0x9e37_79b9);
    let b = Bounds {
        max_wires: 2,
        max_grade: 1,
        depth: 2,
    };
    for _ in 0..attempts {
        let (n, n2, k, k2, m, m2) = (1, 0, rng.gen_range(0..=2), 1, 1, rng.gen_range(0..=1));
        let f = random::graded_term(&mut rng, n, k, 0, &b);
        let f2 = random::graded_term(&mut rng, n2, k2, 1, &b);
        let g = random::graded_term(&mut rng, k, m, 1, &b);
        let g2 = random::graded_term(&mut rng, k2, m2, 0, &b);
        let (lhs, rhs, plain) = interchange(&f, &f2, &g, &g2);
        let (Ok(l), Ok(r), Ok(p)) = (eval(&lhs), eval(&rhs), eval(&plain)) else {
            continue;
        };
        if l != p && l == r {
            check.passed = 1;
            check.description = format!(
                "interchange fails without regrading: f={f} f'={f2} g={g} g'={g2}"
            );
            return check;
        }
    }
    check.fail("no counterexample found".into());
    check
}

/// Factorization round trips on `terms` random terms, and sliding of random
/// injections through knights on `injections` instances.
pub fn factorization(seed: u64, terms: usize, injections: usize) -> SuiteReport {
    let ev = Evaluator::default();
    let mut rng = rng(seed.wrapping_add(100));
    let bounds = Bounds::default();
    let mut round_trip = Check::new("NF", "term equals its reassembled factorization");
    for _ in 0..terms {
        let (n, m) = (wires(&mut rng, &bounds), wires(&mut rng, &bounds));
        let t = random::term(&mut rng, n, m, &bounds);
        match factorize(&t) {
            Ok(f) => {
                let plain = f.zero_part.count_generators(&|g| *g == crate::Generator::Knight) == 0
                    && !f.zero_part.contains_regrade();
                if !plain {
                    round_trip.fail(format!("{t}: zero part {} is not plain", f.zero_part));
                    continue;
                }
                record_eq(&mut round_trip, &ev, &t, &f.reassemble());
            }
            Err(e) => round_trip.fail(format!("{t}: {e}")),
        }
    }
    let mut sliding = Check::new("SLIDE", "t ⊲ knight^a = knight^b ; circuit(t)");
    for _ in 0..injections {
        let a = rng.gen_range(0..=4);
        let b = rng.gen_range(a..=a + 2);
        let t = random::injection(&mut rng, b, a);
        let lhs = GradedTerm::regrade(t.clone(), GradedTerm::knights(a));
        let rhs = GradedTerm::seq(GradedTerm::knights(b), GradedTerm::injection_circuit(&t));
        record_eq(&mut sliding, &ev, &lhs, &rhs);
    }
    SuiteReport {
        suite: "factorization".into(),
        checks: vec![round_trip, sliding],
    }
}

/// Graded evaluation of random plain circuits agrees with Kronecker and
/// matrix products.
pub fn conservativity(seed: u64, count: usize) -> SuiteReport {
    let mut rng = rng(seed.wrapping_add(200));
    let bounds = Bounds::default();
    let mut check = Check::new("CONS", "0-graded terms evaluate as plain circuits");
    for _ in 0..count {
        let (n, m) = (wires(&mut rng, &bounds), wires(&mut rng, &bounds));
        let t = random::plain_term(&mut rng, n, m, &bounds);
        match (eval(&t), eval_plain(&t)) {
            (Ok(graded), Ok(plain)) => {
                check.record(graded.grade() == 0 && *graded.matrix() == plain, || t.to_string())
            }
            (Err(e), _) | (_, Err(e)) => check.fail(format!("{t}: {e}")),
        }
    }
    SuiteReport {
        suite: "conservativity".into(),
        checks: vec![check],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        let report = graded_laws(1, 10, &Bounds::default());
        assert!(report.ok(), "{report}");
        assert_eq!(report.checks.len(), 12);
        assert!(factorization(1, 10, 10).ok());
        assert!(conservativity(1, 10).ok());
    }

    #[test]
    fn zero_instances_pass_vacuously() {
        let report = graded_laws(1, 0, &Bounds::default());
        assert!(report.ok());
        assert!(report.checks.iter().all(|c| c.passed == 0));
    }
}
