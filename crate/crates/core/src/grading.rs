//! The grading prop: finite ordinals and injections, read contravariantly.
//!
//! A grading morphism `n -> m` is an injective map `[m] -> [n]`. It selects
//! (and reorders) `m` of the `n` nondeterministic bits of a graded process.
//! Composition is therefore reversed function composition, and the monoidal
//! product is the block sum.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::stoch::StochMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradingError {
    #[error("injection entry {entry} is out of range for domain grade {dom}")]
    OutOfRange { entry: usize, dom: usize },
    #[error("injection map is not injective: {0} occurs twice")]
    NotInjective(usize),
    #[error("cannot compose injection {left} with {right}: grade {mid_left} != {mid_right}")]
    Mismatch {
        left: String,
        right: String,
        mid_left: usize,
        mid_right: usize,
    },
    #[error("malformed injection literal `{0}`")]
    Syntax(String),
}

/// A morphism `dom_grade -> cod_grade` of the grading prop, stored as the
/// underlying injection `[cod_grade] -> [dom_grade]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Injection {
    dom_grade: usize,
    map: Vec<usize>,
}

impl Injection {
    pub fn new(dom_grade: usize, map: Vec<usize>) -> Result<Self, GradingError> {
        let mut seen = vec![false; dom_grade];
        for &entry in &map {
            if entry >= dom_grade {
                return Err(GradingError::OutOfRange {
                    entry,
                    dom: dom_grade,
                });
            }
            if std::mem::replace(&mut seen[entry], true) {
                return Err(GradingError::NotInjective(entry));
            }
        }
        Ok(Injection { dom_grade, map })
    }

    pub fn identity(n: usize) -> Self {
        Injection {
            dom_grade: n,
            map: (0..n).collect(),
        }
    }

    /// The generator of the grading prop: forget one nondeterministic bit.
    pub fn discard() -> Self {
        Injection {
            dom_grade: 1,
            map: Vec::new(),
        }
    }

    /// Block swap `a + b -> b + a`.
    pub fn symmetry(a: usize, b: usize) -> Self {
        let map = (0..b).map(|i| a + i).chain(0..a).collect();
        Injection {
            dom_grade: a + b,
            map,
        }
    }

    pub fn dom_grade(&self) -> usize {
        self.dom_grade
    }

    pub fn cod_grade(&self) -> usize {
        self.map.len()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.dom_grade == self.map.len() && self.map.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Diagrammatic composition `self ; next`, i.e. the function `self.map ∘ next.map`.
    pub fn compose(&self, next: &Injection) -> Result<Injection, GradingError> {
        if self.cod_grade() != next.dom_grade {
            return Err(GradingError::Mismatch {
                left: self.to_string(),
                right: next.to_string(),
                mid_left: self.cod_grade(),
                mid_right: next.dom_grade,
            });
        }
        Ok(Injection {
            dom_grade: self.dom_grade,
            map: next.map.iter().map(|&i| self.map[i]).collect(),
        })
    }

    pub fn tensor(&self, other: &Injection) -> Injection {
        let shift = self.dom_grade;
        Injection {
            dom_grade: self.dom_grade + other.dom_grade,
            map: self
                .map
                .iter()
                .copied()
                .chain(other.map.iter().map(|&j| shift + j))
                .collect(),
        }
    }

    /// Rearranges the bits of a basis index over `dom_grade` wires into a basis
    /// index over `cod_grade` wires: output wire `j` reads input wire `map[j]`.
    pub fn apply_to_index(&self, index: usize) -> usize {
        let n = self.dom_grade;
        let m = self.map.len();
        self.map.iter().enumerate().fold(0, |acc, (j, &src)| {
            let bit = (index >> (n - 1 - src)) & 1;
            acc | (bit << (m - 1 - j))
        })
    }

    /// The deterministic 0/1 matrix of shape `2^m x 2^n` sending
    /// `|x_0 .. x_{n-1}>` to `|x_{f(0)} .. x_{f(m-1)}>`.
    pub fn embed(&self) -> StochMatrix {
        StochMatrix::from_function(self.dom_grade, self.cod_grade(), |col| {
            Some(self.apply_to_index(col))
        })
    }

    /// All injections `[b] -> [a]`, i.e. grading morphisms `a -> b`, in
    /// lexicographic order of their maps. Empty when `b > a`.
    pub fn enumerate(a: usize, b: usize) -> Vec<Injection> {
        let mut out = Vec::new();
        if b > a {
            return out;
        }
        let mut current = Vec::with_capacity(b);
        let mut used = vec![false; a];
        fn go(
            a: usize,
            b: usize,
            current: &mut Vec<usize>,
            used: &mut [bool],
            out: &mut Vec<Injection>,
        ) {
            if current.len() == b {
                out.push(Injection {
                    dom_grade: a,
                    map: current.clone(),
                });
                return;
            }
            for i in 0..a {
                if !used[i] {
                    used[i] = true;
                    current.push(i);
                    go(a, b, current, used, out);
                    current.pop();
                    used[i] = false;
                }
            }
        }
        go(a, b, &mut current, &mut used, &mut out);
        out
    }
}

impl fmt::Display for Injection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "inj {}->{} [", self.dom_grade, self.cod_grade())?;
        for (i, j) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{j}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for Injection {
    type Err = GradingError;

    /// Parses `inj n->m [i0,i1,...]`; whitespace inside the brackets is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GradingError::Syntax(s.to_string());
        let rest = s.trim().strip_prefix("inj").ok_or_else(bad)?.trim_start();
        let (arrow, list) = rest.split_once('[').ok_or_else(bad)?;
        let (n, m) = arrow.trim().split_once("->").ok_or_else(bad)?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        let m: usize = m.trim().parse().map_err(|_| bad())?;
        let list = list.trim().strip_suffix(']').ok_or_else(bad)?;
        let map = list
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        if map.len() != m {
            return Err(bad());
        }
        Injection::new(n, map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stoch::{swap_matrix, Rational};
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn inj(n: usize, map: &[usize]) -> Injection {
        Injection::new(n, map.to_vec()).unwrap()
    }

    #[test]
    fn identities() {
        assert!(Injection::identity(0).map().is_empty());
        assert_eq!(Injection::identity(2).map(), &[0, 1]);
        for t in Injection::enumerate(3, 2) {
            assert_eq!(Injection::identity(3).compose(&t).unwrap(), t);
            assert_eq!(t.compose(&Injection::identity(2)).unwrap(), t);
        }
    }

    #[test]
    fn compose_examples() {
        let s = inj(2, &[1]);
        let t = inj(1, &[0]);
        assert_eq!(s.compose(&t).unwrap(), inj(2, &[1]));
        let s = inj(3, &[2, 0]);
        let t = inj(2, &[1]);
        assert_eq!(s.compose(&t).unwrap(), inj(3, &[0]));
        assert!(matches!(
            inj(3, &[2, 0]).compose(&inj(3, &[0])),
            Err(GradingError::Mismatch { .. })
        ));
    }

    #[test]
    fn tensor_examples() {
        let id1 = Injection::identity(1);
        assert_eq!(id1.tensor(&id1), Injection::identity(2));
        assert_eq!(Injection::discard().tensor(&id1), inj(2, &[1]));
        let s = inj(2, &[0]);
        assert_eq!(s.tensor(&s), inj(4, &[0, 2]));
    }

    #[test]
    fn symmetry_examples() {
        assert_eq!(Injection::symmetry(0, 3), Injection::identity(3));
        assert_eq!(Injection::symmetry(1, 1).map(), &[1, 0]);
        for a in 0..4 {
            for b in 0..4 {
                let round = Injection::symmetry(a, b)
                    .compose(&Injection::symmetry(b, a))
                    .unwrap();
                assert_eq!(round, Injection::identity(a + b));
            }
        }
    }

    #[test]
    fn invalid_maps_rejected() {
        assert!(matches!(
            Injection::new(2, vec![2]),
            Err(GradingError::OutOfRange { .. })
        ));
        assert!(matches!(
            Injection::new(2, vec![1, 1]),
            Err(GradingError::NotInjective(1))
        ));
    }

    #[test]
    fn embed_examples() {
        assert_eq!(Injection::symmetry(1, 1).embed(), swap_matrix(1, 1));
        assert_eq!(Injection::identity(3).embed(), StochMatrix::identity(3));
        let del = Injection::discard().embed();
        assert_eq!(del.rows(), 1);
        assert_eq!(del.cols(), 2);
        assert!(del.entries().iter().all(|e| e.is_one()));
    }

    #[test]
    fn enumerate_counts() {
        let two = Injection::enumerate(2, 1);
        assert_eq!(two, vec![inj(2, &[0]), inj(2, &[1])]);
        assert_eq!(Injection::enumerate(3, 0), vec![inj(3, &[])]);
        assert!(Injection::enumerate(1, 2).is_empty());
        assert!(Injection::enumerate(0, 1).is_empty());
        for a in 0..=5usize {
            for b in 0..=a {
                let expected: usize = ((a - b + 1)..=a).product();
                let all = Injection::enumerate(a, b);
                assert_eq!(all.len(), expected);
                let mut dedup = all.clone();
                dedup.sort_by(|x, y| x.map.cmp(&y.map));
                dedup.dedup();
                assert_eq!(dedup.len(), expected);
            }
        }
    }

    #[test]
    fn textual_form() {
        let t = inj(3, &[2, 0]);
        assert_eq!(t.to_string(), "inj 3->2 [2,0]");
        assert_eq!("inj 3->2 [2, 0]".parse::<Injection>().unwrap(), t);
        assert_eq!("inj 1->0 []".parse::<Injection>().unwrap(), Injection::discard());
        assert!("inj 3->1 [0,1]".parse::<Injection>().is_err());
        assert!("inj 3->1 [4]".parse::<Injection>().is_err());
    }

    fn arb_injection(max: usize) -> impl Strategy<Value = Injection> {
        (0..=max)
            .prop_flat_map(|n| (Just(n), 0..=n))
            .prop_flat_map(|(n, m)| {
                Just(Injection::enumerate(n, m)).prop_flat_map(|all| {
                    let len = all.len();
                    (0..len).prop_map(move |i| all[i].clone())
                })
            })
    }

    fn deterministic(m: &StochMatrix) -> bool {
        (0..m.cols()).all(|c| {
            let col: Vec<&Rational> = (0..m.rows()).map(|r| m.get(r, c)).collect();
            col.iter().filter(|e| e.is_one()).count() == 1
                && col.iter().filter(|e| e.is_zero()).count() == m.rows() - 1
        })
    }

    proptest! {
        #[test]
        fn embed_is_functorial(s in arb_injection(4), pick in 0usize..1000) {
            let nexts = Injection::enumerate(s.cod_grade(), pick % (s.cod_grade() + 1));
            let t = &nexts[pick % nexts.len()];
            let lhs = s.compose(t).unwrap().embed();
            let rhs = s.embed().then(&t.embed()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn embed_is_monoidal(s in arb_injection(3), t in arb_injection(3)) {
            prop_assert_eq!(s.tensor(&t).embed(), s.embed().kron(&t.embed()));
        }

        #[test]
        fn embedded_injections_are_deterministic(s in arb_injection(4)) {
            prop_assert!(deterministic(&s.embed()));
        }

        #[test]
        fn display_parse_round_trip(s in arb_injection(5)) {
            prop_assert_eq!(s.to_string().parse::<Injection>().unwrap(), s);
        }
    }

    #[test]
    fn symmetry_embeds_to_block_swap() {
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(Injection::symmetry(a, b).embed(), swap_matrix(a, b));
            }
        }
    }
}
