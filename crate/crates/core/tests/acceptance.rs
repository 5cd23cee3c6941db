//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any fails. All comparisons are exact rational equality.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use impcirc_core::bimp::{eval, Evaluator};
use impcirc_core::lang::{compile, parse, run, typecheck, Context};
use impcirc_core::stoch::StochMatrix;
use impcirc_core::suites::{axioms, laws, programs, random::Bounds, SuiteReport};
use impcirc_core::Rational;

const SEED: u64 = 0x1A55_2024;

const BOY_OR_GIRL_1: &str = "let g1 = flip 0.5 in let g2 = flip 0.5 in \
    let _ = observe (if g1 then flip 1 else g2) in (g1, g2)";
const BOY_OR_GIRL_2: &str = "let t = flip 0.5 in let s = flip 0.5 in \
    let _ = observe (if knight then t else s) in (t, s)";

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn dist(pairs: &[(&str, Rational)]) -> BTreeMap<String, Rational> {
    pairs.iter().map(|(k, p)| (k.to_string(), p.clone())).collect()
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn expect(cond: bool, ok: impl Into<String>, bad: impl Into<String>) -> Outcome {
    if cond {
        Ok(ok.into())
    } else {
        Err(bad.into())
    }
}

fn suites(reports: &[SuiteReport]) -> Outcome {
    let counts: Vec<String> = reports
        .iter()
        .flat_map(|s| &s.checks)
        .map(|c| format!("{}={}", c.name, c.passed))
        .collect();
    let failing: Vec<String> = reports
        .iter()
        .flat_map(|s| &s.checks)
        .filter(|c| !c.ok())
        .map(|c| c.to_string())
        .collect();
    expect(failing.is_empty(), counts.join(" "), failing.join("; "))
}

fn boy_or_girl_1() -> Outcome {
    let rep = run(BOY_OR_GIRL_1).map_err(|e| e.to_string())?;
    let b = &rep.branches[0];
    let want = dist(&[("11", r(1, 4)), ("10", r(1, 4)), ("01", r(1, 4)), ("00", r(0, 1))]);
    let p11 = b.normalized.as_ref().map(|n| n["11"].clone());
    expect(
        rep.grade == 0 && rep.branches.len() == 1 && b.dist == want && p11 == Some(r(1, 3)),
        "dist {11:1/4, 10:1/4, 01:1/4, 00:0}, P(11) = 1/3",
        format!("got grade {} and {:?}", rep.grade, rep.branches),
    )
}

fn boy_or_girl_2() -> Outcome {
    let rep = run(BOY_OR_GIRL_2).map_err(|e| e.to_string())?;
    let zero = r(0, 1);
    let want1 = dist(&[("11", r(1, 4)), ("10", r(1, 4)), ("01", zero.clone()), ("00", zero.clone())]);
    let want0 = dist(&[("11", r(1, 4)), ("10", zero.clone()), ("01", r(1, 4)), ("00", zero)]);
    let ok = rep.grade == 1
        && rep.branch("1").map(|b| &b.dist) == Some(&want1)
        && rep.branch("0").map(|b| &b.dist) == Some(&want0)
        && rep
            .branches
            .iter()
            .all(|b| b.normalized.as_ref().map(|n| n["11"].clone()) == Some(r(1, 2)));
    expect(
        ok,
        "grade 1, branch 1 {11:1/4, 10:1/4}, branch 0 {11:1/4, 01:1/4}, P(11) = 1/2 in both",
        format!("got {rep}"),
    )
}

fn block_example() -> Outcome {
    let e = parse("if knight then flip 1 else flip 0.5").map_err(|e| e.to_string())?;
    let te = typecheck(&e, &Context::new()).map_err(|e| e.to_string())?;
    let m = eval(&compile(&te)).map_err(|e| e.to_string())?;
    let want = StochMatrix::new(1, 1, vec![r(1, 1), r(1, 2), r(0, 1), r(1, 2)])
        .expect("valid matrix");
    let blocks = m.blocks();
    expect(
        m.grade() == 1
            && *m.matrix() == want
            && blocks[0].column(0) == vec![r(1, 1), r(0, 1)]
            && blocks[1].column(0) == vec![r(1, 2), r(1, 2)],
        "[[1, 1/2], [0, 1/2]] = δ1 ⊕ (δ1 +1/2 δ0)",
        format!("got grade {}:\n{}", m.grade(), m.matrix()),
    )
}

fn law_suite() -> Outcome {
    let bounds = Bounds {
        max_wires: 6,
        max_grade: 3,
        depth: 3,
    };
    suites(&[laws::graded_laws(SEED, 500, &bounds)])
}

fn axiom_suite() -> Outcome {
    suites(&[axioms::circuit_axioms(
        &Evaluator::default(),
        SEED,
        axioms::PARAMETER_SAMPLES,
    )])
}

fn factorization_suite() -> Outcome {
    suites(&[laws::factorization(SEED, 300, 100)])
}

fn let_law_suite() -> Outcome {
    suites(&[programs::let_laws(SEED, 100)])
}

fn conservativity_suite() -> Outcome {
    suites(&[laws::conservativity(SEED, 200)])
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 Boy-or-Girl 1", boy_or_girl_1, Some(Duration::from_secs(1))),
        ("2 Boy-or-Girl 2", boy_or_girl_2, Some(Duration::from_secs(1))),
        ("3 worked block example", block_example, None),
        ("4 graded law suite G1-G11", law_suite, Some(Duration::from_secs(60))),
        ("5 circuit axiom suite", axiom_suite, None),
        ("6 factorization and sliding", factorization_suite, None),
        ("7 let laws up to regrading", let_law_suite, None),
        ("8 conservativity", conservativity_suite, None),
    ];
    let mut failed = 0;
    for (name, criterion, limit) in criteria {
        let start = Instant::now();
        let outcome = criterion();
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(limit)) if elapsed > limit => {
                Err(format!("took {elapsed:.2?}, limit {limit:?}"))
            }
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({elapsed:.2?}): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name} ({elapsed:.2?}): {detail}");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all 8 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 8 criteria failed");
        ExitCode::FAILURE
    }
}
