//! Evaluation values. Deterministic subterms (wirings, copies, logic gates,
//! knights, conditioning) are kept as partial functions on basis indices and
//! only become dense when composed with a probabilistic part.

use num_traits::{One, Zero};

use super::BimpMorphism;
use crate::grading::Injection;
use crate::stoch::{Rational, StochMatrix};
use crate::terms::Profile;

/// A 0/1 morphism with at most one 1 per column: column `c` maps to row
/// `map[c]`, or to nothing.
#[derive(Debug, Clone)]
pub(crate) struct Det {
    profile: Profile,
    map: Vec<Option<usize>>,
}

#[derive(Debug, Clone)]
pub(crate) enum Value {
    Det(Det),
    Dense(BimpMorphism),
}

impl Det {
    /// Reads a matrix as a partial function, if it is one.
    fn from_matrix(m: &StochMatrix, grade: usize) -> Option<Det> {
        let mut map = vec![None; m.cols()];
        for r in 0..m.rows() {
            for (c, slot) in map.iter_mut().enumerate() {
                let e = m.get(r, c);
                if e.is_zero() {
                    continue;
                }
                if !e.is_one() || slot.is_some() {
                    return None;
                }
                *slot = Some(r);
            }
        }
        Some(Det {
            profile: Profile::new(m.in_wires() - grade, m.out_wires(), grade),
            map,
        })
    }

    fn to_dense(&self) -> BimpMorphism {
        let p = self.profile;
        let matrix =
            StochMatrix::from_function(p.grade + p.arity, p.coarity, |c| self.map[c]);
        BimpMorphism {
            profile: p,
            matrix,
        }
    }
}

impl Value {
    pub(crate) fn from_morphism(m: BimpMorphism) -> Value {
        match Det::from_matrix(&m.matrix, m.profile.grade) {
            Some(d) => Value::Det(d),
            None => Value::Dense(m),
        }
    }

    pub(crate) fn profile(&self) -> Profile {
        match self {
            Value::Det(d) => d.profile,
            Value::Dense(m) => m.profile,
        }
    }

    pub(crate) fn into_morphism(self) -> BimpMorphism {
        match self {
            Value::Det(d) => d.to_dense(),
            Value::Dense(m) => m,
        }
    }

    /// Nonzero entries of column `col` as `(row, value)`.
    fn column(&self, col: usize) -> Vec<(usize, Rational)> {
        match self {
            Value::Det(d) => d.map[col].map(|r| (r, Rational::one())).into_iter().collect(),
            Value::Dense(m) => (0..m.matrix.rows())
                .filter_map(|r| {
                    let e = m.matrix.get(r, col);
                    (!e.is_zero()).then(|| (r, e.clone()))
                })
                .collect(),
        }
    }

    /// `self ; next`; the caller has checked that the wires match.
    pub(crate) fn then(&self, next: &Value) -> Value {
        let Profile {
            arity: n,
            coarity: m,
            grade: a,
        } = self.profile();
        let Profile {
            coarity: l,
            grade: b,
            ..
        } = next.profile();
        let out_profile = Profile::new(n, l, a + b);
        let col_of = |xa: usize, xb: usize, u: usize| (((xa << b) | xb) << n) | u;
        match (self, next) {
            (Value::Dense(f), Value::Dense(g)) => {
                Value::Dense(f.then(g).expect("wires checked by the caller"))
            }
            (Value::Det(f), Value::Det(g)) => {
                let mut map = vec![None; 1 << (a + b + n)];
                for xa in 0..1usize << a {
                    for u in 0..1usize << n {
                        let Some(k) = f.map[(xa << n) | u] else { continue };
                        for xb in 0..1usize << b {
                            map[col_of(xa, xb, u)] = g.map[(xb << m) | k];
                        }
                    }
                }
                Value::Det(Det {
                    profile: out_profile,
                    map,
                })
            }
            _ => {
                let cols = 1usize << (a + b + n);
                let mut out = vec![Rational::zero(); (1usize << l) * cols];
                for xa in 0..1usize << a {
                    for u in 0..1usize << n {
                        for (k, fk) in self.column((xa << n) | u) {
                            for xb in 0..1usize << b {
                                let col = col_of(xa, xb, u);
                                for (i, gi) in next.column((xb << m) | k) {
                                    out[i * cols + col] += &fk * gi;
                                }
                            }
                        }
                    }
                }
                Value::Dense(BimpMorphism {
                    profile: out_profile,
                    matrix: StochMatrix::from_raw(a + b + n, l, out),
                })
            }
        }
    }

    pub(crate) fn tensor(&self, other: &Value) -> Value {
        let Profile {
            arity: n,
            coarity: m,
            grade: a,
        } = self.profile();
        let Profile {
            arity: n2,
            coarity: m2,
            grade: b,
        } = other.profile();
        let out_profile = Profile::new(n + n2, m + m2, a + b);
        let col_of =
            |xa: usize, xb: usize, u: usize, u2: usize| (((((xa << b) | xb) << n) | u) << n2) | u2;
        match (self, other) {
            (Value::Dense(f), Value::Dense(g)) => Value::Dense(f.tensor(g)),
            (Value::Det(f), Value::Det(g)) => {
                let mut map = vec![None; 1 << (a + b + n + n2)];
                for xa in 0..1usize << a {
                    for u in 0..1usize << n {
                        let Some(i) = f.map[(xa << n) | u] else { continue };
                        for xb in 0..1usize << b {
                            for u2 in 0..1usize << n2 {
                                map[col_of(xa, xb, u, u2)] =
                                    g.map[(xb << n2) | u2].map(|i2| (i << m2) | i2);
                            }
                        }
                    }
                }
                Value::Det(Det {
                    profile: out_profile,
                    map,
                })
            }
            _ => {
                let cols = 1usize << (a + b + n + n2);
                let mut out = vec![Rational::zero(); (1usize << (m + m2)) * cols];
                let g_cols: Vec<Vec<(usize, Rational)>> =
                    (0..1usize << (b + n2)).map(|c| other.column(c)).collect();
                for xa in 0..1usize << a {
                    for u in 0..1usize << n {
                        let f_col = self.column((xa << n) | u);
                        if f_col.is_empty() {
                            continue;
                        }
                        for xb in 0..1usize << b {
                            for u2 in 0..1usize << n2 {
                                let col = col_of(xa, xb, u, u2);
                                for (i, fe) in &f_col {
                                    for (i2, ge) in &g_cols[(xb << n2) | u2] {
                                        out[((i << m2) | i2) * cols + col] = fe * ge;
                                    }
                                }
                            }
                        }
                    }
                }
                Value::Dense(BimpMorphism {
                    profile: out_profile,
                    matrix: StochMatrix::from_raw(a + b + n + n2, m + m2, out),
                })
            }
        }
    }

    /// `t ⊲ self`; the caller has checked that `t`'s codomain is this grade.
    pub(crate) fn regrade(&self, t: &Injection) -> Value {
        match self {
            Value::Dense(f) => Value::Dense(f.regrade(t).expect("grade checked by the caller")),
            Value::Det(f) => {
                let Profile {
                    arity: n,
                    coarity: m,
                    ..
                } = f.profile;
                let b = t.dom_grade();
                let mut map = vec![None; 1 << (b + n)];
                for y in 0..1usize << b {
                    let x = t.apply_to_index(y);
                    for u in 0..1usize << n {
                        map[(y << n) | u] = f.map[(x << n) | u];
                    }
                }
                Value::Det(Det {
                    profile: Profile::new(n, m, b),
                    map,
                })
            }
        }
    }
}
