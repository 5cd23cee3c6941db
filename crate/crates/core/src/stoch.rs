//! Exact block-(sub)stochastic matrices over power-of-two dimensions.
//!
//! A matrix `n -> m` has `2^n` columns and `2^m` rows. Row/column index `k`
//! over `w` wires denotes the bitstring whose value is `2^w - 1 - k`: index 0
//! is the all-ones string and the last index is all zeros. Equivalently, the
//! binary digits of an index are the complemented wire values, wire 0 being
//! the most significant digit. Concatenating wire groups concatenates indices,
//! which is what makes the Kronecker product put the left factor on the
//! high-order wires.
//!
//! Everything is exact: entries are arbitrary-precision rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StochError {
    #[error("dimension mismatch: {left} output wires composed with {right} input wires")]
    DimensionMismatch { left: usize, right: usize },
    #[error("expected {expected} entries, found {found}")]
    WrongEntryCount { expected: usize, found: usize },
    #[error("entry {0} is outside [0, 1]")]
    EntryOutOfRange(String),
    #[error("column {column} sums to {sum}, which exceeds 1")]
    ColumnOverflow { column: usize, sum: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator `{0}` expects a probability parameter")]
    MissingParameter(String),
    #[error("generator `{0}` takes no parameter")]
    UnexpectedParameter(String),
    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(String),
    #[error("grading prefix of {grade} wires exceeds the {wires} input wires")]
    GradeTooLarge { grade: usize, wires: usize },
    #[error("cannot parse rational `{0}`")]
    BadRational(String),
    #[error("malformed matrix JSON: {0}")]
    Json(String),
}

/// A `2^out_wires x 2^in_wires` matrix with rational entries in `[0, 1]` and
/// column sums at most 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StochMatrix {
    in_wires: usize,
    out_wires: usize,
    entries: Vec<Rational>,
}

impl StochMatrix {
    /// Builds a matrix from row-major entries, checking the substochastic invariant.
    pub fn new(
        in_wires: usize,
        out_wires: usize,
        entries: Vec<Rational>,
    ) -> Result<Self, StochError> {
        let expected = (1usize << in_wires) * (1usize << out_wires);
        if entries.len() != expected {
            return Err(StochError::WrongEntryCount {
                expected,
                found: entries.len(),
            });
        }
        let one = Rational::one();
        if let Some(bad) = entries.iter().find(|e| e.is_negative() || **e > one) {
            return Err(StochError::EntryOutOfRange(bad.to_string()));
        }
        let m = StochMatrix {
            in_wires,
            out_wires,
            entries,
        };
        for (column, sum) in m.column_sums().into_iter().enumerate() {
            if sum > one {
                return Err(StochError::ColumnOverflow {
                    column,
                    sum: sum.to_string(),
                });
            }
        }
        Ok(m)
    }

    pub(crate) fn from_raw(in_wires: usize, out_wires: usize, entries: Vec<Rational>) -> Self {
        debug_assert_eq!(entries.len(), (1 << in_wires) * (1 << out_wires));
        StochMatrix {
            in_wires,
            out_wires,
            entries,
        }
    }

    /// A 0/1 matrix whose column `c` has a single 1 at row `f(c)`, or is zero
    /// when `f(c)` is `None`.
    pub fn from_function(
        in_wires: usize,
        out_wires: usize,
        f: impl Fn(usize) -> Option<usize>,
    ) -> Self {
        let cols = 1usize << in_wires;
        let rows = 1usize << out_wires;
        let mut entries = vec![Rational::zero(); rows * cols];
        for c in 0..cols {
            if let Some(r) = f(c) {
                assert!(r < rows, "row {r} out of range for {out_wires} wires");
                entries[r * cols + c] = Rational::one();
            }
        }
        StochMatrix::from_raw(in_wires, out_wires, entries)
    }

    pub fn identity(wires: usize) -> Self {
        StochMatrix::from_function(wires, wires, Some)
    }

    /// The unique stochastic matrix `n -> 0`: a single row of ones.
    pub fn discard(wires: usize) -> Self {
        StochMatrix::from_function(wires, 0, |_| Some(0))
    }

    pub fn in_wires(&self) -> usize {
        self.in_wires
    }

    pub fn out_wires(&self) -> usize {
        self.out_wires
    }

    pub fn rows(&self) -> usize {
        1 << self.out_wires
    }

    pub fn cols(&self) -> usize {
        1 << self.in_wires
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row * self.cols() + col]
    }

    pub fn column(&self, col: usize) -> Vec<Rational> {
        (0..self.rows()).map(|r| self.get(r, col).clone()).collect()
    }

    pub fn column_sums(&self) -> Vec<Rational> {
        let cols = self.cols();
        let mut sums = vec![Rational::zero(); cols];
        for (i, e) in self.entries.iter().enumerate() {
            if !e.is_zero() {
                sums[i % cols] += e;
            }
        }
        sums
    }

    pub fn is_stochastic(&self) -> bool {
        self.column_sums().iter().all(One::is_one)
    }

    pub fn is_substochastic(&self) -> bool {
        let one = Rational::one();
        self.entries.iter().all(|e| !e.is_negative() && *e <= one)
            && self.column_sums().iter().all(|s| *s <= one)
    }

    /// Sequential composition `self ; next`, i.e. the product `M(next) * M(self)`.
    pub fn then(&self, next: &StochMatrix) -> Result<StochMatrix, StochError> {
        if self.out_wires != next.in_wires {
            return Err(StochError::DimensionMismatch {
                left: self.out_wires,
                right: next.in_wires,
            });
        }
        let (rows, mid, cols) = (next.rows(), self.rows(), self.cols());
        let nonzero_rows: Vec<Vec<(usize, &Rational)>> = (0..mid)
            .map(|k| {
                (0..cols)
                    .filter_map(|j| {
                        let e = self.get(k, j);
                        (!e.is_zero()).then_some((j, e))
                    })
                    .collect()
            })
            .collect();
        let mut out = vec![Rational::zero(); rows * cols];
        for i in 0..rows {
            let row = &mut out[i * cols..(i + 1) * cols];
            for (k, lhs) in next.entries[i * mid..(i + 1) * mid].iter().enumerate() {
                if lhs.is_zero() {
                    continue;
                }
                for &(j, rhs) in &nonzero_rows[k] {
                    if lhs.is_one() {
                        row[j] += rhs;
                    } else {
                        row[j] += lhs * rhs;
                    }
                }
            }
        }
        Ok(StochMatrix::from_raw(self.in_wires, next.out_wires, out))
    }

    /// Kronecker product; `self` owns the high-order wires.
    pub fn kron(&self, other: &StochMatrix) -> StochMatrix {
        let (r1, c1, r2, c2) = (self.rows(), self.cols(), other.rows(), other.cols());
        let cols = c1 * c2;
        let mut out = vec![Rational::zero(); r1 * r2 * cols];
        for i1 in 0..r1 {
            for j1 in 0..c1 {
                let a = self.get(i1, j1);
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..r2 {
                    for j2 in 0..c2 {
                        let b = other.get(i2, j2);
                        if !b.is_zero() {
                            out[(i1 * r2 + i2) * cols + j1 * c2 + j2] = a * b;
                        }
                    }
                }
            }
        }
        StochMatrix::from_raw(
            self.in_wires + other.in_wires,
            self.out_wires + other.out_wires,
            out,
        )
    }

    /// Splits the input wires as `grade + rest` and returns the `2^grade`
    /// column blocks, in increasing index order (decreasing order of the
    /// grading bitstring).
    pub fn blocks(&self, grade: usize) -> Result<Vec<StochMatrix>, StochError> {
        if grade > self.in_wires {
            return Err(StochError::GradeTooLarge {
                grade,
                wires: self.in_wires,
            });
        }
        let n = self.in_wires - grade;
        let width = 1usize << n;
        Ok((0..1usize << grade)
            .map(|g| {
                let mut entries = Vec::with_capacity(self.rows() * width);
                for r in 0..self.rows() {
                    let start = r * self.cols() + g * width;
                    entries.extend_from_slice(&self.entries[start..start + width]);
                }
                StochMatrix::from_raw(n, self.out_wires, entries)
            })
            .collect())
    }

    /// Column `col` as a subdistribution keyed by output bitstring.
    pub fn column_distribution(&self, col: usize) -> BTreeMap<String, Rational> {
        (0..self.rows())
            .map(|r| (index_to_bits(r, self.out_wires), self.get(r, col).clone()))
            .collect()
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            input: self.in_wires,
            output: self.out_wires,
            entries: (0..self.rows())
                .map(|r| (0..self.cols()).map(|c| self.get(r, c).to_string()).collect())
                .collect(),
        }
    }

    pub fn from_json(json: &MatrixJson) -> Result<StochMatrix, StochError> {
        if json.entries.len() != 1 << json.output
            || json.entries.iter().any(|row| row.len() != 1 << json.input)
        {
            return Err(StochError::Json(format!(
                "expected a {}x{} grid",
                1usize << json.output,
                1usize << json.input
            )));
        }
        let entries = json
            .entries
            .iter()
            .flatten()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()?;
        StochMatrix::new(json.input, json.output, entries)
    }
}

/// Serialized form `{ "in": n, "out": m, "entries": [["num/den", ...], ...] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    #[serde(rename = "in")]
    pub input: usize,
    #[serde(rename = "out")]
    pub output: usize,
    pub entries: Vec<Vec<String>>,
}

impl fmt::Display for StochMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for r in 0..self.rows() {
            f.write_str("[")?;
            for c in 0..self.cols() {
                if c > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{:>width$}", cells[r * self.cols() + c])?;
            }
            f.write_str("]\n")?;
        }
        Ok(())
    }
}

/// The bitstring denoted by `index` over `wires` wires.
pub fn index_to_bits(index: usize, wires: usize) -> String {
    (0..wires)
        .map(|w| {
            if (index >> (wires - 1 - w)) & 1 == 0 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// Inverse of [`index_to_bits`].
pub fn bits_to_index(bits: &str) -> Option<usize> {
    bits.chars().try_fold(0usize, |acc, ch| match ch {
        '1' => Some(acc << 1),
        '0' => Some((acc << 1) | 1),
        _ => None,
    })
}

/// Permutation matrix sending `|u v>` (u of `n` bits, v of `m` bits) to `|v u>`.
pub fn swap_matrix(n: usize, m: usize) -> StochMatrix {
    let low = (1usize << m) - 1;
    StochMatrix::from_function(n + m, n + m, |c| {
        let (u, v) = (c >> m, c & low);
        Some((v << n) | u)
    })
}

/// Parses `3`, `1/2` or a decimal such as `0.25` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, StochError> {
    let bad = || StochError::BadRational(text.to_string());
    let t = text.trim();
    if let Some((num, den)) = t.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let ok = |s: &str| s.chars().all(|c| c.is_ascii_digit());
        if (int.is_empty() && frac.is_empty()) || !ok(frac) || !ok(int.trim_start_matches('-')) {
            return Err(bad());
        }
        let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(digits, scale));
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

pub fn check_probability(p: &Rational) -> Result<(), StochError> {
    if p.is_negative() || *p > Rational::one() {
        Err(StochError::ProbabilityOutOfRange(p.to_string()))
    } else {
        Ok(())
    }
}

/// `del: 1 -> 0`.
pub fn del() -> StochMatrix {
    StochMatrix::discard(1)
}

/// `copy: 1 -> 2`, `|x> -> |xx>`.
pub fn copy() -> StochMatrix {
    StochMatrix::from_function(1, 2, |c| Some(if c == 0 { 0 } else { 3 }))
}

/// `and: 2 -> 1`.
pub fn and() -> StochMatrix {
    // Index 0 is |11>; every other input yields |0>.
    StochMatrix::from_function(2, 1, |c| Some(if c == 0 { 0 } else { 1 }))
}

/// `not: 1 -> 1`.
pub fn not() -> StochMatrix {
    StochMatrix::from_function(1, 1, |c| Some(1 - c))
}

/// `state(p): 0 -> 1`, emitting `p|1> + (1-p)|0>`.
pub fn state(p: &Rational) -> Result<StochMatrix, StochError> {
    check_probability(p)?;
    Ok(StochMatrix::from_raw(
        0,
        1,
        vec![p.clone(), Rational::one() - p],
    ))
}

/// `cond: 2 -> 1`, `|xy> -> |x>` when `x = y` and no output otherwise.
pub fn cond() -> StochMatrix {
    StochMatrix::from_function(2, 1, |c| match c {
        0 => Some(0),
        3 => Some(1),
        _ => None,
    })
}

/// Matrix of a named base generator. `state` (alias `flip`) takes a parameter.
pub fn generator_matrix(name: &str, param: Option<&Rational>) -> Result<StochMatrix, StochError> {
    let plain = |m: StochMatrix| match param {
        None => Ok(m),
        Some(_) => Err(StochError::UnexpectedParameter(name.to_string())),
    };
    match name {
        "del" => plain(del()),
        "copy" => plain(copy()),
        "and" => plain(and()),
        "not" => plain(not()),
        "cond" => plain(cond()),
        "state" | "flip" => {
            let p = param.ok_or_else(|| StochError::MissingParameter(name.to_string()))?;
            state(p)
        }
        other => Err(StochError::UnknownGenerator(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn column(entries: &[Rational]) -> StochMatrix {
        let wires = entries.len().trailing_zeros() as usize;
        StochMatrix::new(0, wires, entries.to_vec()).unwrap()
    }

    fn grid(in_w: usize, out_w: usize, rows: &[&[i64]]) -> StochMatrix {
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| Rational::from_integer(x.into())))
            .collect();
        StochMatrix::new(in_w, out_w, entries).unwrap()
    }

    #[test]
    fn matmul_examples() {
        let half = state(&q(1, 2)).unwrap();
        assert_eq!(half.then(&not()).unwrap(), half);
        let f = copy();
        assert_eq!(f.then(&StochMatrix::identity(2)).unwrap(), f);
        let p = state(&q(3, 7)).unwrap();
        assert_eq!(p.then(&del()).unwrap(), StochMatrix::identity(0));
        assert!(matches!(
            copy().then(&not()),
            Err(StochError::DimensionMismatch { left: 2, right: 1 })
        ));
    }

    #[test]
    fn kron_examples() {
        let f = and();
        assert_eq!(f.kron(&StochMatrix::identity(0)), f);
        let half = state(&q(1, 2)).unwrap();
        assert_eq!(half.kron(&half), column(&vec![q(1, 4); 4]));
        let one = state(&q(1, 1)).unwrap();
        let zero = state(&q(0, 1)).unwrap();
        assert_eq!(
            one.kron(&zero),
            column(&[q(0, 1), q(1, 1), q(0, 1), q(0, 1)])
        );
        assert_eq!(bits_to_index("10"), Some(1));
    }

    #[test]
    fn swap_examples() {
        let s = swap_matrix(1, 1);
        let images: Vec<usize> = (0..4)
            .map(|c| (0..4).find(|&r| s.get(r, c).is_one()).unwrap())
            .collect();
        assert_eq!(images, vec![0, 2, 1, 3]);
        assert_eq!(swap_matrix(0, 3), StochMatrix::identity(3));
        for n in 0..3 {
            for m in 0..3 {
                let round = swap_matrix(n, m).then(&swap_matrix(m, n)).unwrap();
                assert_eq!(round, StochMatrix::identity(n + m));
            }
        }
    }

    #[test]
    fn generator_examples() {
        let p = q(2, 5);
        assert_eq!(state(&p).unwrap(), column(&[q(2, 5), q(3, 5)]));
        assert_eq!(copy(), grid(1, 2, &[&[1, 0], &[0, 0], &[0, 0], &[0, 1]]));
        assert_eq!(cond(), grid(2, 1, &[&[1, 0, 0, 0], &[0, 0, 0, 1]]));
        assert_eq!(
            cond().column_sums(),
            vec![q(1, 1), q(0, 1), q(0, 1), q(1, 1)]
        );
        assert!(!cond().is_stochastic());
        assert_eq!(not(), grid(1, 1, &[&[0, 1], &[1, 0]]));
        assert_eq!(and(), grid(2, 1, &[&[1, 0, 0, 0], &[0, 1, 1, 1]]));
        assert_eq!(del(), grid(1, 0, &[&[1, 1]]));
    }

    #[test]
    fn generator_errors() {
        assert!(matches!(
            generator_matrix("xor", None),
            Err(StochError::UnknownGenerator(_))
        ));
        assert!(matches!(
            generator_matrix("state", Some(&q(3, 2))),
            Err(StochError::ProbabilityOutOfRange(_))
        ));
        assert!(matches!(
            generator_matrix("state", Some(&q(-1, 2))),
            Err(StochError::ProbabilityOutOfRange(_))
        ));
        assert!(matches!(
            generator_matrix("state", None),
            Err(StochError::MissingParameter(_))
        ));
        assert!(matches!(
            generator_matrix("copy", Some(&q(1, 2))),
            Err(StochError::UnexpectedParameter(_))
        ));
        assert_eq!(generator_matrix("flip", Some(&q(1, 3))).unwrap(), state(&q(1, 3)).unwrap());
    }

    #[test]
    fn blocks_examples() {
        let f = StochMatrix::new(1, 1, vec![q(1, 1), q(1, 2), q(0, 1), q(1, 2)]).unwrap();
        let blocks = f.blocks(1).unwrap();
        assert_eq!(blocks[0], column(&[q(1, 1), q(0, 1)]));
        assert_eq!(blocks[1], column(&[q(1, 2), q(1, 2)]));
        assert_eq!(f.blocks(0).unwrap(), vec![f.clone()]);
        assert!(matches!(f.blocks(2), Err(StochError::GradeTooLarge { .. })));
    }

    #[test]
    fn blocks_of_kronecker_with_grading_factor() {
        // A grading factor whose two blocks are both the half state: every
        // block of the product is (1/2 state) (x) f.
        let half_del = StochMatrix::new(1, 1, vec![q(1, 2), q(1, 2), q(1, 2), q(1, 2)]).unwrap();
        let f = copy();
        let prod = half_del.kron(&f);
        let blocks = prod.blocks(1).unwrap();
        let expected = state(&q(1, 2)).unwrap().kron(&f);
        assert_eq!(blocks, vec![expected.clone(), expected]);
    }

    #[test]
    fn new_validates() {
        assert!(matches!(
            StochMatrix::new(0, 1, vec![q(3, 4), q(1, 2)]),
            Err(StochError::ColumnOverflow { .. })
        ));
        assert!(matches!(
            StochMatrix::new(0, 1, vec![q(3, 2), q(0, 1)]),
            Err(StochError::EntryOutOfRange(_))
        ));
        assert!(matches!(
            StochMatrix::new(0, 1, vec![q(1, 2)]),
            Err(StochError::WrongEntryCount { .. })
        ));
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("0.5").unwrap(), q(1, 2));
        assert_eq!(parse_rational("1").unwrap(), q(1, 1));
        assert_eq!(parse_rational("2/6").unwrap(), q(1, 3));
        assert_eq!(parse_rational(".25").unwrap(), q(1, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn bit_indexing() {
        assert_eq!(index_to_bits(0, 2), "11");
        assert_eq!(index_to_bits(3, 2), "00");
        assert_eq!(index_to_bits(1, 2), "10");
        assert_eq!(index_to_bits(0, 0), "");
        for w in 0..5 {
            for i in 0..1 << w {
                assert_eq!(bits_to_index(&index_to_bits(i, w)), Some(i));
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let m = StochMatrix::new(1, 1, vec![q(1, 3), q(0, 1), q(2, 3), q(1, 1)]).unwrap();
        let json = serde_json::to_string(&m.to_json()).unwrap();
        assert_eq!(json, r#"{"in":1,"out":1,"entries":[["1/3","0"],["2/3","1"]]}"#);
        let back: MatrixJson = serde_json::from_str(&json).unwrap();
        assert_eq!(StochMatrix::from_json(&back).unwrap(), m);
    }
}
