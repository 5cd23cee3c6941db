//! Every graded term factors as `(id_n ⊗ knight^a) ; f0` with `f0` a plain
//! (0-graded, knight-free, regrading-free) circuit `n + a -> m`: slide each
//! regrading through the knights beneath it, then pull the knights to the
//! front.

use crate::grading::Injection;
use crate::terms::{Generator, GradedSignature, GradedTerm, Profile, TermError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub arity: usize,
    pub grade: usize,
    /// Plain circuit `arity + grade -> coarity`; grading inputs come last.
    pub zero_part: GradedTerm,
}

impl Factorization {
    /// `(id_arity ⊗ knight^grade) ; zero_part`.
    pub fn reassemble(&self) -> GradedTerm {
        GradedTerm::seq(
            GradedTerm::par(GradedTerm::id(self.arity), GradedTerm::knights(self.grade)),
            self.zero_part.clone(),
        )
    }
}

/// The plain circuit of a grading morphism; see [`GradedTerm::injection_circuit`].
pub fn injection_circuit(t: &Injection) -> GradedTerm {
    GradedTerm::injection_circuit(t)
}

pub fn factorize(term: &GradedTerm) -> Result<Factorization, TermError> {
    let profile = term.infer_profile(&GradedSignature::imp_circ())?;
    let zero_part = zero_part(term);
    Ok(Factorization {
        arity: profile.arity,
        grade: profile.grade,
        zero_part,
    })
}

fn profile(term: &GradedTerm) -> Profile {
    term.infer_profile(&GradedSignature::imp_circ())
        .expect("subterm of a validated term")
}

fn zero_part(term: &GradedTerm) -> GradedTerm {
    match term {
        GradedTerm::Gen(Generator::Knight) => GradedTerm::Id1,
        GradedTerm::Gen(_) | GradedTerm::Id0 | GradedTerm::Id1 | GradedTerm::Swap => term.clone(),
        GradedTerm::Seq(f, g) => {
            let b = profile(g).grade;
            zero_part(f)
                .tensor(GradedTerm::id(b))
                .then(zero_part(g))
        }
        GradedTerm::Par(f, g) => {
            let pf = profile(f);
            let pg = profile(g);
            let (n, a, n2, b) = (pf.arity, pf.grade, pg.arity, pg.grade);
            // Inputs arrive as (u, u', xa, xb); the factors want (u, xa) and (u', xb).
            let perm: Vec<usize> = (0..n)
                .chain(n + n2..n + n2 + a)
                .chain(n..n + n2)
                .chain(n + n2 + a..n + n2 + a + b)
                .collect();
            GradedTerm::permutation(&perm).then(zero_part(f).tensor(zero_part(g)))
        }
        GradedTerm::Regrade(t, f) => {
            let n = profile(f).arity;
            GradedTerm::id(n)
                .tensor(GradedTerm::injection_circuit(t))
                .then(zero_part(f))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimp::{eval, equal};
    use crate::terms::parse_term;

    fn factor(src: &str) -> Factorization {
        factorize(&parse_term(src).unwrap()).unwrap()
    }

    fn is_plain(t: &GradedTerm) -> bool {
        t.count_generators(&|g| *g == Generator::Knight) == 0 && !t.contains_regrade()
    }

    #[test]
    fn knight_base_case() {
        let f = factor("knight");
        assert_eq!(f.grade, 1);
        assert_eq!(f.zero_part, GradedTerm::Id1);
    }

    #[test]
    fn knight_then_not() {
        let f = factor("(seq knight (gen not))");
        assert_eq!(f.grade, 1);
        assert_eq!(f.zero_part, GradedTerm::gen(Generator::Not));
        assert!(equal(&parse_term("(seq knight (gen not))").unwrap(), &f.reassemble()).unwrap());
    }

    #[test]
    fn regraded_unit() {
        let f = factor("(regrade (inj 1->0 []) id0)");
        assert_eq!(f.grade, 1);
        assert_eq!(f.zero_part, GradedTerm::gen(Generator::Del));
    }

    #[test]
    fn plain_terms_factor_to_themselves() {
        let src = "(seq (par (gen copy) id1) (par id1 (gen and)))";
        let f = factor(src);
        assert_eq!(f.grade, 0);
        assert!(is_plain(&f.zero_part));
        assert_eq!(
            eval(&f.zero_part).unwrap(),
            eval(&parse_term(src).unwrap()).unwrap()
        );
    }

    #[test]
    fn mixed_term_round_trips() {
        for src in [
            "(par (seq knight (gen not)) (par id1 knight))",
            "(seq (par id1 knight) (seq (gen cond) (par (gen copy) knight)))",
            "(regrade (inj 3->2 [2,0]) (par knight (seq (par knight id1) (gen and))))",
            "(seq (regrade (inj 2->1 [1]) knight) (par (gen copy) (regrade (inj 1->1 [0]) knight)))",
        ] {
            let t = parse_term(src).unwrap();
            let f = factorize(&t).unwrap();
            assert!(is_plain(&f.zero_part), "{src}");
            let p = f.zero_part.profile().unwrap();
            let pt = t.profile().unwrap();
            assert_eq!(p, Profile::new(pt.arity + pt.grade, pt.coarity, 0));
            assert!(equal(&t, &f.reassemble()).unwrap(), "{src}");
        }
    }

    #[test]
    fn invalid_terms_rejected() {
        assert!(factorize(&parse_term("(seq knight (gen and))").unwrap()).is_err());
    }
}
