//! Axioms of causal circuits over `del`, `copy`, `and`, `not` and `state(p)`,
//! plus two equations that must fail once conditioning is added.

use rand::Rng;

use super::random::probability;
use super::{record_eq, rng, Check, SuiteReport};
use crate::bimp::{Evaluator, Model};
use crate::stoch::Rational;
use crate::terms::{Generator, GradedTerm};

/// Random parameters tried per axiom.
pub const PARAMETER_SAMPLES: usize = 25;

fn del() -> GradedTerm {
    GradedTerm::gen(Generator::Del)
}
fn copy() -> GradedTerm {
    GradedTerm::gen(Generator::Copy)
}
fn and() -> GradedTerm {
    GradedTerm::gen(Generator::And)
}
fn not() -> GradedTerm {
    GradedTerm::gen(Generator::Not)
}
fn cond() -> GradedTerm {
    GradedTerm::gen(Generator::Cond)
}
fn state(p: i64, q: i64) -> GradedTerm {
    GradedTerm::state(Rational::new(p.into(), q.into()))
}
fn id1() -> GradedTerm {
    GradedTerm::Id1
}
fn seq(f: GradedTerm, g: GradedTerm) -> GradedTerm {
    GradedTerm::seq(f, g)
}
fn par(f: GradedTerm, g: GradedTerm) -> GradedTerm {
    GradedTerm::par(f, g)
}

/// The parameter-free axioms as `(name, description, lhs, rhs)`.
pub fn fixed_axioms() -> Vec<(&'static str, &'static str, GradedTerm, GradedTerm)> {
    vec![
        ("A1", "copy is coassociative", seq(copy(), par(copy(), id1())), seq(copy(), par(id1(), copy()))),
        ("A2l", "del is a left counit of copy", seq(copy(), par(del(), id1())), id1()),
        ("A2r", "del is a right counit of copy", seq(copy(), par(id1(), del())), id1()),
        ("A3", "copy is cocommutative", seq(copy(), GradedTerm::Swap), copy()),
        ("B1", "and is associative", seq(par(and(), id1()), and()), seq(par(id1(), and()), and())),
        ("B2l", "state 1 is a left unit of and", seq(par(state(1, 1), id1()), and()), id1()),
        ("B2r", "state 1 is a right unit of and", seq(par(id1(), state(1, 1)), and()), id1()),
        ("B3", "and is commutative", seq(GradedTerm::Swap, and()), and()),
        ("B4", "not is an involution", seq(not(), not()), id1()),
        ("B5", "and is idempotent", seq(copy(), and()), id1()),
        ("C1", "state 0 can be copied", seq(state(0, 1), copy()), par(state(0, 1), state(0, 1))),
        ("C2", "state 1 can be copied", seq(state(1, 1), copy()), par(state(1, 1), state(1, 1))),
        (
            "C3",
            "and can be copied",
            seq(and(), copy()),
            seq(
                seq(par(copy(), copy()), par(par(id1(), GradedTerm::Swap), id1())),
                par(and(), and()),
            ),
        ),
        ("C4", "not can be copied", seq(copy(), par(not(), not())), seq(not(), copy())),
        ("D1", "and can be deleted", seq(and(), del()), par(del(), del())),
        ("D2", "not can be deleted", seq(not(), del()), del()),
    ]
}

/// `(state(p_1) ⊗ ... ⊗ state(p_n)) ; t` for random `p_i`.
fn on_random_inputs(rng: &mut impl Rng, t: &GradedTerm, inputs: usize) -> GradedTerm {
    let states = GradedTerm::tensor_all((0..inputs).map(|_| GradedTerm::state(probability(rng))));
    GradedTerm::seq(states, t.clone())
}

/// Every axiom is checked as an exact matrix equality and again on `samples`
/// random product inputs; `D3` and `E1` quantify over `samples` random
/// parameters. `N1` and `N2` must not hold.
pub fn circuit_axioms<M: Model>(ev: &Evaluator<M>, seed: u64, samples: usize) -> SuiteReport {
    let mut rng = rng(seed.wrapping_add(300));
    let mut checks = Vec::new();
    if samples == 0 {
        for (name, description, _, _) in fixed_axioms() {
            checks.push(Check::new(name, description));
        }
        for (name, description) in [
            ("D3", "states can be deleted"),
            ("E1", "not flips a state"),
            ("N1", "cond;del differs from del⊗del"),
            ("N2", "copy is not natural for state(1/2)"),
        ] {
            checks.push(Check::new(name, description));
        }
        return SuiteReport {
            suite: "circuit axioms".into(),
            checks,
        };
    }
    for (name, description, lhs, rhs) in fixed_axioms() {
        let mut check = Check::new(name, description);
        record_eq(&mut check, ev, &lhs, &rhs);
        let inputs = lhs.profile().expect("axioms are well formed").arity;
        for _ in 0..samples {
            let mut probe = rng.clone();
            let l = on_random_inputs(&mut probe, &lhs, inputs);
            let r = on_random_inputs(&mut rng, &rhs, inputs);
            record_eq(&mut check, ev, &l, &r);
        }
        checks.push(check);
    }
    let mut d3 = Check::new("D3", "states can be deleted");
    let mut e1 = Check::new("E1", "not flips a state");
    for _ in 0..samples {
        let p = probability(&mut rng);
        let one_minus = Rational::from_integer(1.into()) - &p;
        record_eq(&mut d3, ev, &seq(GradedTerm::state(p.clone()), del()), &GradedTerm::Id0);
        record_eq(&mut e1, ev, &seq(GradedTerm::state(p), not()), &GradedTerm::state(one_minus));
    }
    checks.push(d3);
    checks.push(e1);

    let negatives = [
        ("N1", "cond;del differs from del⊗del", seq(cond(), del()), par(del(), del())),
        (
            "N2",
            "copy is not natural for state(1/2)",
            seq(state(1, 2), copy()),
            par(state(1, 2), state(1, 2)),
        ),
    ];
    for (name, description, lhs, rhs) in negatives {
        let mut check = Check::new(name, description);
        match super::same(ev, &lhs, &rhs) {
            Ok(equal) => check.record(!equal, || format!("{lhs} unexpectedly equals {rhs}")),
            Err(e) => check.fail(e.to_string()),
        }
        checks.push(check);
    }
    SuiteReport {
        suite: "circuit axioms".into(),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stoch::{self, StochError, StochMatrix};

    #[test]
    fn axioms_hold_in_the_standard_model() {
        let report = circuit_axioms(&Evaluator::default(), 0, 5);
        assert!(report.ok(), "{report}");
        assert_eq!(report.checks.len(), 20);
    }

    struct BrokenNot;

    impl Model for BrokenNot {
        fn generator(&self, g: &Generator) -> Result<StochMatrix, StochError> {
            match g {
                Generator::Not => StochMatrix::new(1, 1, vec![
                    Rational::new(1.into(), 2.into()),
                    Rational::from_integer(0.into()),
                    Rational::new(1.into(), 2.into()),
                    Rational::from_integer(1.into()),
                ]),
                other => stoch::generator_matrix(other.name(), other.param()),
            }
        }
    }

    #[test]
    fn corrupted_not_breaks_b4() {
        let report = circuit_axioms(&Evaluator::new(BrokenNot), 0, 3);
        assert!(!report.check("B4").unwrap().ok());
        assert!(report.check("A1").unwrap().ok());
    }
}
