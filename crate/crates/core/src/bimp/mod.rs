//! Block-stochastic semantics of graded terms.
//!
//! An `a`-graded morphism `n -> m` is a `2^m x 2^(a+n)` substochastic matrix
//! whose leading `a` input wires are grading wires. Fixing the grading bits
//! selects one `2^m x 2^n` block: one nondeterministic branch.
//!
//! The structural operations follow the parametrised construction:
//!
//! ```text
//! r ⊲ f   = (I(r) ⊗ id_n) ; f
//! f ; g   = (σ_{a,b} ⊗ id_n) ; (id_b ⊗ f) ; g
//! f ⊗ f'  = (id_a ⊗ σ_{b,n} ⊗ id_n') ; (f ⊗ f')
//! ```
//!
//! They are computed here by index arithmetic rather than by materialising the
//! permutation and identity factors; the integration tests check the two
//! routes agree.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::grading::Injection;
use crate::stoch::{self, Rational, StochError, StochMatrix};
use crate::terms::{Generator, GradedSignature, GradedTerm, Profile, TermError};

mod value;

use value::Value;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BimpError {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Stoch(#[from] StochError),
    #[error("profiles {left} and {right} are not comparable")]
    NotComparable { left: Profile, right: Profile },
    #[error("term needs {wires} wires, above the limit of {limit}")]
    TooLarge { wires: usize, limit: usize },
    #[error("`{0}` has no plain circuit semantics")]
    NotPlain(String),
}

/// Interpretation of the 0-graded generators. The knight is fixed.
pub trait Model {
    fn generator(&self, g: &Generator) -> Result<StochMatrix, StochError>;
}

/// The intended semantics: `del`, `copy`, `and`, `not`, `state(p)`, `cond`.
#[derive(Debug, Clone, Copy, Default)]
pub struct StandardModel;

impl Model for StandardModel {
    fn generator(&self, g: &Generator) -> Result<StochMatrix, StochError> {
        stoch::generator_matrix(g.name(), g.param())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BimpMorphism {
    profile: Profile,
    matrix: StochMatrix,
}

impl BimpMorphism {
    /// Wraps a matrix whose first `grade` input wires are grading wires.
    pub fn new(matrix: StochMatrix, grade: usize) -> Result<Self, StochError> {
        if grade > matrix.in_wires() {
            return Err(StochError::GradeTooLarge {
                grade,
                wires: matrix.in_wires(),
            });
        }
        Ok(BimpMorphism {
            profile: Profile::new(matrix.in_wires() - grade, matrix.out_wires(), grade),
            matrix,
        })
    }

    pub fn profile(&self) -> Profile {
        self.profile
    }

    pub fn grade(&self) -> usize {
        self.profile.grade
    }

    pub fn matrix(&self) -> &StochMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> StochMatrix {
        self.matrix
    }

    /// One `2^m x 2^n` block per grading bitstring, in decreasing bitstring order.
    pub fn blocks(&self) -> Vec<StochMatrix> {
        self.matrix
            .blocks(self.profile.grade)
            .expect("grade never exceeds input wires")
    }

    /// Knight: `0 ->_1 1`, the 2x2 identity with its input bent into a grading wire.
    pub fn knight() -> Self {
        BimpMorphism {
            profile: Profile::new(0, 1, 1),
            matrix: StochMatrix::identity(1),
        }
    }

    /// Lifts a plain matrix to a 0-graded morphism.
    pub fn plain(matrix: StochMatrix) -> Self {
        BimpMorphism {
            profile: Profile::new(matrix.in_wires(), matrix.out_wires(), 0),
            matrix,
        }
    }

    /// `self ; next`, grading wires ordered `self`'s then `next`'s.
    pub fn then(&self, next: &BimpMorphism) -> Result<BimpMorphism, StochError> {
        let Profile {
            arity: n,
            coarity: m,
            grade: a,
        } = self.profile;
        let Profile {
            arity: m2,
            coarity: l,
            grade: b,
        } = next.profile;
        if m != m2 {
            return Err(StochError::DimensionMismatch { left: m, right: m2 });
        }
        let f = &self.matrix;
        let g = &next.matrix;
        let rows = 1usize << l;
        let cols = 1usize << (a + b + n);
        let mut out = vec![Rational::zero(); rows * cols];
        for xa in 0..1usize << a {
            for u in 0..1usize << n {
                let col_f = (xa << n) | u;
                for k in 0..1usize << m {
                    let fk = f.get(k, col_f);
                    if fk.is_zero() {
                        continue;
                    }
                    for xb in 0..1usize << b {
                        let col_g = (xb << m) | k;
                        let col = (((xa << b) | xb) << n) | u;
                        for i in 0..rows {
                            let gi = g.get(i, col_g);
                            if gi.is_zero() {
                                continue;
                            }
                            let cell = &mut out[i * cols + col];
                            if fk.is_one() {
                                *cell += gi;
                            } else if gi.is_one() {
                                *cell += fk;
                            } else {
                                *cell += gi * fk;
                            }
                        }
                    }
                }
            }
        }
        Ok(BimpMorphism {
            profile: Profile::new(n, l, a + b),
            matrix: StochMatrix::from_raw(a + b + n, l, out),
        })
    }

    /// `self ⊗ other`, grading wires ordered `self`'s then `other`'s.
    pub fn tensor(&self, other: &BimpMorphism) -> BimpMorphism {
        let Profile {
            arity: n,
            coarity: m,
            grade: a,
        } = self.profile;
        let Profile {
            arity: n2,
            coarity: m2,
            grade: b,
        } = other.profile;
        let f = &self.matrix;
        let g = &other.matrix;
        let rows = 1usize << (m + m2);
        let cols = 1usize << (a + b + n + n2);
        let mut out = vec![Rational::zero(); rows * cols];
        let nonzero = |mat: &StochMatrix, col: usize| -> Vec<(usize, Rational)> {
            (0..mat.rows())
                .filter_map(|r| {
                    let e = mat.get(r, col);
                    (!e.is_zero()).then(|| (r, e.clone()))
                })
                .collect()
        };
        let g_cols: Vec<Vec<(usize, Rational)>> = (0..g.cols()).map(|c| nonzero(g, c)).collect();
        for xa in 0..1usize << a {
            for u in 0..1usize << n {
                let f_col = nonzero(f, (xa << n) | u);
                if f_col.is_empty() {
                    continue;
                }
                for xb in 0..1usize << b {
                    for u2 in 0..1usize << n2 {
                        let col = (((((xa << b) | xb) << n) | u) << n2) | u2;
                        for (i, fe) in &f_col {
                            for (i2, ge) in &g_cols[(xb << n2) | u2] {
                                out[((i << m2) | i2) * cols + col] = fe * ge;
                            }
                        }
                    }
                }
            }
        }
        BimpMorphism {
            profile: Profile::new(n + n2, m + m2, a + b),
            matrix: StochMatrix::from_raw(a + b + n + n2, m + m2, out),
        }
    }

    /// `t ⊲ self` for a grading morphism `t: b -> a`, where `a` is this grade.
    pub fn regrade(&self, t: &Injection) -> Result<BimpMorphism, TermError> {
        let Profile {
            arity: n,
            coarity: m,
            grade: a,
        } = self.profile;
        if t.cod_grade() != a {
            return Err(TermError::RegradeMismatch {
                target: t.cod_grade(),
                grade: a,
                path: "root".into(),
            });
        }
        let b = t.dom_grade();
        let f = &self.matrix;
        let rows = 1usize << m;
        let cols = 1usize << (b + n);
        let mut out = vec![Rational::zero(); rows * cols];
        for y in 0..1usize << b {
            let x = t.apply_to_index(y);
            for u in 0..1usize << n {
                let src = (x << n) | u;
                let dst = (y << n) | u;
                for i in 0..rows {
                    let e = f.get(i, src);
                    if !e.is_zero() {
                        out[i * cols + dst] = e.clone();
                    }
                }
            }
        }
        Ok(BimpMorphism {
            profile: Profile::new(n, m, b),
            matrix: StochMatrix::from_raw(b + n, m, out),
        })
    }
}

/// Evaluates graded terms under a model of the base generators.
#[derive(Debug, Clone)]
pub struct Evaluator<M = StandardModel> {
    model: M,
    signature: GradedSignature,
    max_wires: Option<usize>,
}

impl Default for Evaluator<StandardModel> {
    fn default() -> Self {
        Evaluator::new(StandardModel)
    }
}

impl<M: Model> Evaluator<M> {
    pub fn new(model: M) -> Self {
        Evaluator {
            model,
            signature: GradedSignature::imp_circ(),
            max_wires: None,
        }
    }

    /// Refuse terms whose matrices would exceed `limit` wires on either side.
    pub fn with_max_wires(mut self, limit: usize) -> Self {
        self.max_wires = Some(limit);
        self
    }

    pub fn eval(&self, term: &GradedTerm) -> Result<BimpMorphism, BimpError> {
        term.validate(&self.signature)?;
        Ok(self.go(term)?.into_morphism())
    }

    fn guard(&self, p: Profile) -> Result<(), BimpError> {
        if let Some(limit) = self.max_wires {
            let wires = (p.grade + p.arity).max(p.coarity);
            if wires > limit {
                return Err(BimpError::TooLarge { wires, limit });
            }
        }
        Ok(())
    }

    fn go(&self, term: &GradedTerm) -> Result<Value, BimpError> {
        let out = match term {
            GradedTerm::Id0 => Value::from_morphism(BimpMorphism::plain(StochMatrix::identity(0))),
            GradedTerm::Id1 => Value::from_morphism(BimpMorphism::plain(StochMatrix::identity(1))),
            GradedTerm::Swap => Value::from_morphism(BimpMorphism::plain(stoch::swap_matrix(1, 1))),
            GradedTerm::Gen(Generator::Knight) => Value::from_morphism(BimpMorphism::knight()),
            GradedTerm::Gen(g) => Value::from_morphism(BimpMorphism::plain(self.model.generator(g)?)),
            GradedTerm::Seq(f, g) => self.go(f)?.then(&self.go(g)?),
            GradedTerm::Par(f, g) => self.go(f)?.tensor(&self.go(g)?),
            GradedTerm::Regrade(t, f) => self.go(f)?.regrade(t),
        };
        self.guard(out.profile())?;
        Ok(out)
    }
}

/// Evaluates a term under the standard model.
pub fn eval(term: &GradedTerm) -> Result<BimpMorphism, BimpError> {
    Evaluator::default().eval(term)
}

/// Plain circuit semantics of a knight-free, regrading-free term, by
/// Kronecker products and matrix products only.
pub fn eval_plain(term: &GradedTerm) -> Result<StochMatrix, BimpError> {
    eval_plain_with(term, &StandardModel)
}

pub fn eval_plain_with(term: &GradedTerm, model: &impl Model) -> Result<StochMatrix, BimpError> {
    Ok(match term {
        GradedTerm::Id0 => StochMatrix::identity(0),
        GradedTerm::Id1 => StochMatrix::identity(1),
        GradedTerm::Swap => stoch::swap_matrix(1, 1),
        GradedTerm::Gen(Generator::Knight) => return Err(BimpError::NotPlain("knight".into())),
        GradedTerm::Gen(g) => model.generator(g)?,
        GradedTerm::Seq(f, g) => eval_plain_with(f, model)?.then(&eval_plain_with(g, model)?)?,
        GradedTerm::Par(f, g) => eval_plain_with(f, model)?.kron(&eval_plain_with(g, model)?),
        GradedTerm::Regrade(t, _) => return Err(BimpError::NotPlain(t.to_string())),
    })
}

fn comparable(s: Profile, t: Profile, same_grade: bool) -> Result<(), BimpError> {
    let ok = s.arity == t.arity && s.coarity == t.coarity && (!same_grade || s.grade == t.grade);
    if ok {
        Ok(())
    } else {
        Err(BimpError::NotComparable { left: s, right: t })
    }
}

/// Exact semantic equality. Terms with different profiles are
/// [`BimpError::NotComparable`] rather than unequal.
pub fn equal(s: &GradedTerm, t: &GradedTerm) -> Result<bool, BimpError> {
    let sig = GradedSignature::imp_circ();
    comparable(s.infer_profile(&sig)?, t.infer_profile(&sig)?, true)?;
    Ok(eval(s)? == eval(t)?)
}

/// Which side of a comparison the witness regrades.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegradedSide {
    /// `witness ⊲ right = left`.
    Right,
    /// `witness ⊲ left = right`.
    Left,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegradingWitness {
    pub injection: Injection,
    pub side: RegradedSide,
}

/// Searches for a grading morphism relating two terms of equal arity and
/// coarity. The term of smaller grade is regraded up to the larger one; the
/// search covers every injection, in the order of [`Injection::enumerate`].
pub fn equal_up_to_regrading(
    s: &GradedTerm,
    t: &GradedTerm,
) -> Result<Option<RegradingWitness>, BimpError> {
    let fs = eval(s)?;
    let ft = eval(t)?;
    comparable(fs.profile(), ft.profile(), false)?;
    Ok(find_regrading(&fs, &ft))
}

/// [`equal_up_to_regrading`] on already evaluated morphisms.
pub fn find_regrading(s: &BimpMorphism, t: &BimpMorphism) -> Option<RegradingWitness> {
    if s.profile().arity != t.profile().arity || s.profile().coarity != t.profile().coarity {
        return None;
    }
    let (big, small, side) = if s.grade() >= t.grade() {
        (s, t, RegradedSide::Right)
    } else {
        (t, s, RegradedSide::Left)
    };
    Injection::enumerate(big.grade(), small.grade())
        .into_iter()
        .find(|r| small.regrade(r).map(|m| m == *big).unwrap_or(false))
        .map(|injection| RegradingWitness { injection, side })
}

/// Total mass of each column of a block, i.e. the probability that a run
/// from that input survives conditioning.
pub fn masses(block: &StochMatrix) -> Vec<Rational> {
    block.column_sums()
}

/// Normalises a subdistribution; `None` when it has zero mass.
pub fn normalize(dist: &[Rational]) -> Option<Vec<Rational>> {
    let total: Rational = dist.iter().sum();
    if total.is_zero() {
        return None;
    }
    Some(dist.iter().map(|p| p / &total).collect())
}

impl PartialEq<StochMatrix> for BimpMorphism {
    fn eq(&self, other: &StochMatrix) -> bool {
        self.matrix == *other
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse_term;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn term(src: &str) -> GradedTerm {
        parse_term(src).unwrap()
    }

    #[test]
    fn knight_is_bent_identity() {
        let k = eval(&GradedTerm::knight()).unwrap();
        assert_eq!(k.profile(), Profile::new(0, 1, 1));
        assert_eq!(*k.matrix(), StochMatrix::identity(1));
        // The embedding route: I(id_1) ⊗ id_0.
        assert_eq!(
            *k.matrix(),
            Injection::identity(1).embed().kron(&StochMatrix::identity(0))
        );
    }

    #[test]
    fn sliding_del() {
        let lhs = term("(seq knight (gen del))");
        let rhs = term("(regrade (inj 1->0 []) id0)");
        let l = eval(&lhs).unwrap();
        assert_eq!(l.profile(), Profile::new(0, 0, 1));
        assert_eq!(*l.matrix(), stoch::del());
        assert_eq!(eval(&rhs).unwrap(), l);
        assert!(equal(&lhs, &rhs).unwrap());
    }

    #[test]
    fn sliding_swap() {
        let lhs = term("(seq (par knight knight) swap)");
        let rhs = term("(regrade (inj 2->2 [1,0]) (par knight knight))");
        assert!(equal(&lhs, &rhs).unwrap());
    }

    #[test]
    fn copy_is_not_natural() {
        let lhs = term("(seq (gen state 1/2) (gen copy))");
        let rhs = term("(par (gen state 1/2) (gen state 1/2))");
        assert!(!equal(&lhs, &rhs).unwrap());
        assert_eq!(
            eval(&lhs).unwrap().matrix().column(0),
            vec![q(1, 2), q(0, 1), q(0, 1), q(1, 2)]
        );
        assert_eq!(eval(&rhs).unwrap().matrix().column(0), vec![q(1, 4); 4]);
    }

    #[test]
    fn not_comparable_is_distinct_from_false() {
        let err = equal(&GradedTerm::knight(), &term("(gen state 1/2)")).unwrap_err();
        assert!(matches!(err, BimpError::NotComparable { .. }));
        let err = equal_up_to_regrading(&GradedTerm::Id1, &GradedTerm::knight()).unwrap_err();
        assert!(matches!(err, BimpError::NotComparable { .. }));
    }

    #[test]
    fn regrading_witnesses() {
        let t = term("(seq (par knight knight) (gen and))");
        let w = equal_up_to_regrading(&t, &t).unwrap().unwrap();
        assert_eq!(w.injection, Injection::identity(2));

        let t = term("(par knight (seq knight (gen not)))");
        let s = GradedTerm::regrade(Injection::symmetry(1, 1), t.clone());
        let w = equal_up_to_regrading(&s, &t).unwrap().unwrap();
        assert_eq!(w.injection, Injection::symmetry(1, 1));
        assert_eq!(w.side, RegradedSide::Right);

        // Reversed roles: the smaller grade sits on the left.
        let small = GradedTerm::knight();
        let big = term("(par (seq knight (gen del)) knight)");
        let w = equal_up_to_regrading(&small, &big).unwrap().unwrap();
        assert_eq!(w.side, RegradedSide::Left);
        assert_eq!(w.injection, Injection::new(2, vec![1]).unwrap());

        let none = equal_up_to_regrading(&term("(gen state 1/3)"), &GradedTerm::knight()).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn plain_route_rejects_graded_terms() {
        assert!(matches!(
            eval_plain(&GradedTerm::knight()),
            Err(BimpError::NotPlain(_))
        ));
        assert!(matches!(
            eval_plain(&term("(regrade (inj 0->0 []) id0)")),
            Err(BimpError::NotPlain(_))
        ));
        assert_eq!(eval_plain(&term("(seq (gen copy) (gen and))")).unwrap(), StochMatrix::identity(1));
    }

    #[test]
    fn wire_limit() {
        let ev = Evaluator::default().with_max_wires(2);
        assert!(ev.eval(&GradedTerm::knights(2)).is_ok());
        assert!(matches!(
            ev.eval(&GradedTerm::knights(3)),
            Err(BimpError::TooLarge { wires: 3, limit: 2 })
        ));
    }

    #[test]
    fn normalization() {
        let d = vec![q(1, 4), q(1, 4), q(1, 4), q(0, 1)];
        let n = normalize(&d).unwrap();
        assert_eq!(n[0], q(1, 3));
        assert!(normalize(&[q(0, 1)]).is_none());
    }
}
