//! Running closed programs: one subdistribution per nondeterministic branch.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde_json::{json, Map, Value};

use super::{compile, parse, typecheck, Context, Expr, LangError, Type};
use crate::bimp::Evaluator;
use crate::stoch::{index_to_bits, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    /// Grading bitstring selecting this branch.
    pub bits: String,
    /// Probability of each outcome bitstring.
    pub dist: BTreeMap<String, Rational>,
    /// Total mass; below 1 when conditioning discarded runs.
    pub mass: Rational,
    /// `dist / mass`, or `None` when the branch has no mass.
    pub normalized: Option<BTreeMap<String, Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub ty: Type,
    pub grade: usize,
    /// In decreasing order of `bits`.
    pub branches: Vec<Branch>,
}

pub fn run(src: &str) -> Result<RunReport, LangError> {
    run_expr(&parse(src)?)
}

pub fn run_expr(e: &Expr) -> Result<RunReport, LangError> {
    run_with(e, &Evaluator::default())
}

/// [`run_expr`] under a custom evaluator, e.g. one with a wire limit.
pub fn run_with(e: &Expr, evaluator: &Evaluator) -> Result<RunReport, LangError> {
    let te = typecheck(e, &Context::new())?;
    let m = evaluator.eval(&compile(&te))?;
    let branches = m
        .blocks()
        .iter()
        .enumerate()
        .map(|(g, block)| {
            let dist = block.column_distribution(0);
            let mass: Rational = dist.values().sum();
            let normalized = (!mass.is_zero())
                .then(|| dist.iter().map(|(k, p)| (k.clone(), p / &mass)).collect());
            Branch {
                bits: index_to_bits(g, te.grade),
                dist,
                mass,
                normalized,
            }
        })
        .collect();
    Ok(RunReport {
        ty: te.ty,
        grade: te.grade,
        branches,
    })
}

fn dist_json(d: &BTreeMap<String, Rational>) -> Value {
    Value::Object(
        d.iter()
            .map(|(k, p)| (k.clone(), Value::String(p.to_string())))
            .collect::<Map<_, _>>(),
    )
}

impl RunReport {
    /// `{"branches": [{"bits", "dist", "mass", "normalized"}], "grade"}` with
    /// keys sorted and rationals in lowest terms.
    pub fn to_json(&self) -> Value {
        let branches: Vec<Value> = self
            .branches
            .iter()
            .map(|b| {
                json!({
                    "bits": b.bits,
                    "dist": dist_json(&b.dist),
                    "mass": b.mass.to_string(),
                    "normalized": b.normalized.as_ref().map_or(Value::Null, dist_json),
                })
            })
            .collect();
        json!({ "branches": branches, "grade": self.grade })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("values serialize")
    }

    pub fn branch(&self, bits: &str) -> Option<&Branch> {
        self.branches.iter().find(|b| b.bits == bits)
    }
}

fn write_dist(
    f: &mut impl fmt::Write,
    d: &BTreeMap<String, Rational>,
    num: &dyn Fn(&Rational) -> String,
) -> fmt::Result {
    for (i, (k, p)) in d.iter().rev().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "|{k}>: {}", num(p))?;
    }
    Ok(())
}

impl RunReport {
    /// The pretty format with every probability printed by `num`.
    pub fn pretty_with(&self, num: &dyn Fn(&Rational) -> String) -> String {
        let mut f = String::new();
        self.write_pretty(&mut f, num).expect("writing to a string");
        f
    }

    fn write_pretty(&self, f: &mut impl fmt::Write, num: &dyn Fn(&Rational) -> String) -> fmt::Result {
        writeln!(f, "type: {}", self.ty)?;
        writeln!(f, "grade: {}", self.grade)?;
        for b in &self.branches {
            if self.grade == 0 {
                writeln!(f, "distribution:")?;
            } else {
                writeln!(f, "branch {}:", b.bits)?;
            }
            f.write_str("  dist: ")?;
            write_dist(f, &b.dist, num)?;
            writeln!(f)?;
            writeln!(f, "  mass: {}", num(&b.mass))?;
            f.write_str("  normalized: ")?;
            match &b.normalized {
                Some(n) => write_dist(f, n, num)?,
                None => f.write_str("undefined (zero mass)")?,
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_pretty(f, &|p| p.to_string())
    }
}
