//! Graded monoidal terms over a graded signature.
//!
//! Terms are built from generators, the structural constants `id0`, `id1`
//! and `swap`, sequential composition, parallel composition and regrading by
//! a grading morphism. Profiles `(arity, coarity, grade)` are inferred
//! structurally: sequencing and tensoring add grades, regrading replaces the
//! grade by the domain of the grading morphism.

mod sexpr;
mod wiring;

use std::fmt;

use thiserror::Error;

use crate::grading::Injection;
use crate::stoch::Rational;

pub use sexpr::{parse_term, SexprError};

/// A generator of the imprecise circuit signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Generator {
    Del,
    Copy,
    And,
    Not,
    State(Rational),
    Cond,
    Knight,
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::Del => "del",
            Generator::Copy => "copy",
            Generator::And => "and",
            Generator::Not => "not",
            Generator::State(_) => "state",
            Generator::Cond => "cond",
            Generator::Knight => "knight",
        }
    }

    pub fn param(&self) -> Option<&Rational> {
        match self {
            Generator::State(p) => Some(p),
            _ => None,
        }
    }
}

/// Declared profile of one generator name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorDecl {
    pub name: String,
    pub profile: Profile,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSignature {
    decls: Vec<GeneratorDecl>,
}

impl GradedSignature {
    pub fn new(decls: Vec<GeneratorDecl>) -> Result<Self, TermError> {
        for (i, d) in decls.iter().enumerate() {
            if decls[..i].iter().any(|e| e.name == d.name) {
                return Err(TermError::DuplicateGenerator(d.name.clone()));
            }
        }
        Ok(GradedSignature { decls })
    }

    fn from_table(table: &[(&str, usize, usize, usize)]) -> Self {
        GradedSignature {
            decls: table
                .iter()
                .map(|&(name, arity, coarity, grade)| GeneratorDecl {
                    name: name.to_string(),
                    profile: Profile::new(arity, coarity, grade),
                })
                .collect(),
        }
    }

    /// The plain circuit signature: `del`, `copy`, `and`, `not`, `state`.
    pub fn circ() -> Self {
        Self::from_table(&[
            ("del", 1, 0, 0),
            ("copy", 1, 2, 0),
            ("and", 2, 1, 0),
            ("not", 1, 1, 0),
            ("state", 0, 1, 0),
        ])
    }

    /// Circuits plus the knight `0 ->_1 1` and conditioning `cond: 2 ->_0 1`.
    pub fn imp_circ() -> Self {
        let mut sig = Self::circ();
        sig.decls.extend(Self::from_table(&[("knight", 0, 1, 1), ("cond", 2, 1, 0)]).decls);
        sig
    }

    pub fn lookup(&self, name: &str) -> Option<Profile> {
        self.decls.iter().find(|d| d.name == name).map(|d| d.profile)
    }

    pub fn decls(&self) -> &[GeneratorDecl] {
        &self.decls
    }
}

impl Default for GradedSignature {
    fn default() -> Self {
        Self::imp_circ()
    }
}

/// `arity ->_grade coarity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Profile {
    pub arity: usize,
    pub coarity: usize,
    pub grade: usize,
}

impl Profile {
    pub const fn new(arity: usize, coarity: usize, grade: usize) -> Self {
        Profile {
            arity,
            coarity,
            grade,
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ->_{} {}", self.arity, self.grade, self.coarity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("unknown generator `{name}` at {path}")]
    UnknownGenerator { name: String, path: String },
    #[error("coarity {coarity} ≠ arity {arity} in sequential composition at {path}")]
    SeqMismatch {
        coarity: usize,
        arity: usize,
        path: String,
    },
    #[error("regrading target grade {target} ≠ term grade {grade} at {path}")]
    RegradeMismatch {
        target: usize,
        grade: usize,
        path: String,
    },
    #[error("duplicate generator `{0}` in signature")]
    DuplicateGenerator(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GradedTerm {
    Gen(Generator),
    Id0,
    Id1,
    Swap,
    Seq(Box<GradedTerm>, Box<GradedTerm>),
    Par(Box<GradedTerm>, Box<GradedTerm>),
    Regrade(Injection, Box<GradedTerm>),
}

impl GradedTerm {
    pub fn gen(g: Generator) -> Self {
        GradedTerm::Gen(g)
    }

    pub fn knight() -> Self {
        GradedTerm::Gen(Generator::Knight)
    }

    pub fn state(p: Rational) -> Self {
        GradedTerm::Gen(Generator::State(p))
    }

    pub fn seq(f: GradedTerm, g: GradedTerm) -> Self {
        GradedTerm::Seq(Box::new(f), Box::new(g))
    }

    pub fn par(f: GradedTerm, g: GradedTerm) -> Self {
        GradedTerm::Par(Box::new(f), Box::new(g))
    }

    pub fn regrade(t: Injection, f: GradedTerm) -> Self {
        GradedTerm::Regrade(t, Box::new(f))
    }

    pub fn infer_profile(&self, sig: &GradedSignature) -> Result<Profile, TermError> {
        self.profile_at(sig, &mut Vec::new())
    }

    /// Profile under the default imprecise-circuit signature.
    pub fn profile(&self) -> Result<Profile, TermError> {
        self.infer_profile(&GradedSignature::imp_circ())
    }

    pub fn validate(&self, sig: &GradedSignature) -> Result<(), TermError> {
        self.infer_profile(sig).map(|_| ())
    }

    fn profile_at(
        &self,
        sig: &GradedSignature,
        path: &mut Vec<&'static str>,
    ) -> Result<Profile, TermError> {
        let here = |path: &Vec<&'static str>| {
            if path.is_empty() {
                "root".to_string()
            } else {
                path.join("/")
            }
        };
        match self {
            GradedTerm::Id0 => Ok(Profile::new(0, 0, 0)),
            GradedTerm::Id1 => Ok(Profile::new(1, 1, 0)),
            GradedTerm::Swap => Ok(Profile::new(2, 2, 0)),
            GradedTerm::Gen(g) => sig.lookup(g.name()).ok_or_else(|| TermError::UnknownGenerator {
                name: g.name().to_string(),
                path: here(path),
            }),
            GradedTerm::Seq(f, g) => {
                path.push("seq.0");
                let pf = f.profile_at(sig, path)?;
                path.pop();
                path.push("seq.1");
                let pg = g.profile_at(sig, path)?;
                path.pop();
                if pf.coarity != pg.arity {
                    return Err(TermError::SeqMismatch {
                        coarity: pf.coarity,
                        arity: pg.arity,
                        path: here(path),
                    });
                }
                Ok(Profile::new(pf.arity, pg.coarity, pf.grade + pg.grade))
            }
            GradedTerm::Par(f, g) => {
                path.push("par.0");
                let pf = f.profile_at(sig, path)?;
                path.pop();
                path.push("par.1");
                let pg = g.profile_at(sig, path)?;
                path.pop();
                Ok(Profile::new(
                    pf.arity + pg.arity,
                    pf.coarity + pg.coarity,
                    pf.grade + pg.grade,
                ))
            }
            GradedTerm::Regrade(t, f) => {
                path.push("regrade");
                let pf = f.profile_at(sig, path)?;
                path.pop();
                if t.cod_grade() != pf.grade {
                    return Err(TermError::RegradeMismatch {
                        target: t.cod_grade(),
                        grade: pf.grade,
                        path: here(path),
                    });
                }
                Ok(Profile::new(pf.arity, pf.coarity, t.dom_grade()))
            }
        }
    }

    /// Number of occurrences of generators satisfying `pred`.
    pub fn count_generators(&self, pred: &impl Fn(&Generator) -> bool) -> usize {
        match self {
            GradedTerm::Gen(g) => usize::from(pred(g)),
            GradedTerm::Id0 | GradedTerm::Id1 | GradedTerm::Swap => 0,
            GradedTerm::Seq(f, g) | GradedTerm::Par(f, g) => {
                f.count_generators(pred) + g.count_generators(pred)
            }
            GradedTerm::Regrade(_, f) => f.count_generators(pred),
        }
    }

    pub fn contains_regrade(&self) -> bool {
        match self {
            GradedTerm::Regrade(..) => true,
            GradedTerm::Seq(f, g) | GradedTerm::Par(f, g) => {
                f.contains_regrade() || g.contains_regrade()
            }
            _ => false,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            GradedTerm::Seq(f, g) | GradedTerm::Par(f, g) => 1 + f.size() + g.size(),
            GradedTerm::Regrade(_, f) => 1 + f.size(),
            _ => 1,
        }
    }
}
