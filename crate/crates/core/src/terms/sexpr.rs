//! S-expression syntax for graded terms.
//!
//! ```text
//! term ::= id0 | id1 | swap | knight
//!        | (gen NAME [PARAM])
//!        | (seq term term+) | (par term term+)
//!        | (regrade (inj n->m [i0,...]) term)
//! ```
//!
//! `seq`/`par` with more than two arguments nest to the left. `;` starts a
//! comment running to the end of the line. The printer emits binary forms only,
//! so `parse_term(&t.to_string()) == t`.

use std::fmt;

use thiserror::Error;

use super::{Generator, GradedTerm};
use crate::grading::Injection;
use crate::stoch::{check_probability, parse_rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct SexprError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok<'a> {
    Open,
    Close,
    Atom(&'a str),
}

struct Lexer<'a> {
    src: &'a str,
    toks: Vec<(Tok<'a>, usize)>,
}

impl<'a> Lexer<'a> {
    fn run(src: &'a str) -> Result<Vec<(Tok<'a>, usize)>, SexprError> {
        let mut lx = Lexer {
            src,
            toks: Vec::new(),
        };
        let bytes = src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            match bytes[i] {
                b if b.is_ascii_whitespace() => i += 1,
                b';' => {
                    while i < bytes.len() && bytes[i] != b'\n' {
                        i += 1;
                    }
                }
                b'(' => {
                    lx.toks.push((Tok::Open, i));
                    i += 1;
                }
                b')' => {
                    lx.toks.push((Tok::Close, i));
                    i += 1;
                }
                b'[' => {
                    let start = i;
                    let end = src[i..]
                        .find(']')
                        .ok_or_else(|| error_at(src, start, "unterminated `[`"))?;
                    i += end + 1;
                    lx.toks.push((Tok::Atom(&src[start..i]), start));
                }
                _ => {
                    let start = i;
                    while i < bytes.len()
                        && !bytes[i].is_ascii_whitespace()
                        && !matches!(bytes[i], b'(' | b')' | b'[' | b';')
                    {
                        i += 1;
                    }
                    lx.toks.push((Tok::Atom(&lx.src[start..i]), start));
                }
            }
        }
        Ok(lx.toks)
    }
}

fn error_at(src: &str, offset: usize, message: impl Into<String>) -> SexprError {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    SexprError {
        line,
        col,
        message: message.into(),
    }
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok<'a>, usize)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.src.len(), |t| t.1)
    }

    fn err(&self, message: impl Into<String>) -> SexprError {
        error_at(self.src, self.offset(), message)
    }

    fn next(&mut self) -> Option<Tok<'a>> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn peek(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn expect_close(&mut self) -> Result<(), SexprError> {
        match self.peek() {
            Some(Tok::Close) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err("expected `)`")),
        }
    }

    fn atom(&mut self, what: &str) -> Result<&'a str, SexprError> {
        match self.peek() {
            Some(Tok::Atom(a)) => {
                let a = *a;
                self.pos += 1;
                Ok(a)
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn term(&mut self) -> Result<GradedTerm, SexprError> {
        let start = self.pos;
        match self.next() {
            None => Err(self.err("unexpected end of input")),
            Some(Tok::Close) => {
                self.pos = start;
                Err(self.err("unexpected `)`"))
            }
            Some(Tok::Atom(a)) => match a {
                "id0" => Ok(GradedTerm::Id0),
                "id1" => Ok(GradedTerm::Id1),
                "swap" => Ok(GradedTerm::Swap),
                "knight" => Ok(GradedTerm::knight()),
                other => {
                    self.pos = start;
                    Err(self.err(format!("unknown atom `{other}`")))
                }
            },
            Some(Tok::Open) => {
                let head = self.atom("a form name")?;
                let t = match head {
                    "gen" => self.generator()?,
                    "seq" | "par" => {
                        let mut acc = self.term()?;
                        let mut count = 1;
                        while !matches!(self.peek(), Some(Tok::Close) | None) {
                            let next = self.term()?;
                            acc = if head == "seq" {
                                GradedTerm::seq(acc, next)
                            } else {
                                GradedTerm::par(acc, next)
                            };
                            count += 1;
                        }
                        if count < 2 {
                            return Err(self.err(format!("`{head}` needs at least two terms")));
                        }
                        acc
                    }
                    "regrade" => {
                        let inj = self.injection()?;
                        let body = self.term()?;
                        GradedTerm::regrade(inj, body)
                    }
                    other => {
                        self.pos -= 1;
                        return Err(self.err(format!("unknown form `{other}`")));
                    }
                };
                self.expect_close()?;
                Ok(t)
            }
        }
    }

    fn generator(&mut self) -> Result<GradedTerm, SexprError> {
        let name_pos = self.pos;
        let name = self.atom("a generator name")?;
        let g = match name {
            "del" => Generator::Del,
            "copy" => Generator::Copy,
            "and" => Generator::And,
            "not" => Generator::Not,
            "cond" => Generator::Cond,
            "knight" => Generator::Knight,
            "state" | "flip" => {
                let p_pos = self.pos;
                let text = self.atom("a probability")?;
                let p = parse_rational(text)
                    .and_then(|p| check_probability(&p).map(|_| p))
                    .map_err(|e| {
                        self.pos = p_pos;
                        self.err(e.to_string())
                    })?;
                Generator::State(p)
            }
            other => {
                self.pos = name_pos;
                return Err(self.err(format!("unknown generator `{other}`")));
            }
        };
        Ok(GradedTerm::Gen(g))
    }

    fn injection(&mut self) -> Result<Injection, SexprError> {
        if !matches!(self.next(), Some(Tok::Open)) {
            self.pos -= 1;
            return Err(self.err("expected `(inj n->m [..])`"));
        }
        let start = self.pos;
        let mut parts = Vec::new();
        while let Some(Tok::Atom(a)) = self.peek() {
            parts.push(*a);
            self.pos += 1;
        }
        self.expect_close()?;
        let text = parts.join(" ");
        text.parse::<Injection>().map_err(|e| {
            self.pos = start;
            self.err(e.to_string())
        })
    }
}

/// Parses one term; trailing input other than comments is an error.
pub fn parse_term(src: &str) -> Result<GradedTerm, SexprError> {
    let toks = Lexer::run(src)?;
    let mut p = Parser { src, toks, pos: 0 };
    let t = p.term()?;
    if p.pos < p.toks.len() {
        return Err(p.err("trailing input after term"));
    }
    Ok(t)
}

impl fmt::Display for GradedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GradedTerm::Id0 => f.write_str("id0"),
            GradedTerm::Id1 => f.write_str("id1"),
            GradedTerm::Swap => f.write_str("swap"),
            GradedTerm::Gen(Generator::Knight) => f.write_str("knight"),
            GradedTerm::Gen(Generator::State(p)) => write!(f, "(gen state {p})"),
            GradedTerm::Gen(g) => write!(f, "(gen {})", g.name()),
            GradedTerm::Seq(a, b) => write!(f, "(seq {a} {b})"),
            GradedTerm::Par(a, b) => write!(f, "(par {a} {b})"),
            GradedTerm::Regrade(t, a) => write!(f, "(regrade ({t}) {a})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stoch::Rational;

    #[test]
    fn parses_spec_forms() {
        let t = parse_term("(seq (par id1 knight) (gen and))").unwrap();
        assert_eq!(
            t,
            GradedTerm::seq(
                GradedTerm::par(GradedTerm::Id1, GradedTerm::knight()),
                GradedTerm::gen(Generator::And)
            )
        );
        let r = parse_term("(regrade (inj 2->1 [0]) knight)").unwrap();
        assert_eq!(
            r,
            GradedTerm::regrade(Injection::new(2, vec![0]).unwrap(), GradedTerm::knight())
        );
        let s = parse_term("(gen state 1/2)").unwrap();
        assert_eq!(s, GradedTerm::state(Rational::new(1.into(), 2.into())));
        assert_eq!(parse_term("(gen flip 0.5)").unwrap(), s);
        assert_eq!(parse_term("(gen knight)").unwrap(), GradedTerm::knight());
    }

    #[test]
    fn nary_forms_nest_left() {
        let t = parse_term("(par id1 id1 id1) ; three wires").unwrap();
        assert_eq!(t, GradedTerm::id(3));
    }

    #[test]
    fn round_trips() {
        for src in [
            "(seq (par id1 knight) (gen and))",
            "(regrade (inj 3->2 [2,0]) (par knight knight))",
            "(seq (gen state 1/3) (gen copy))",
            "(par id0 (seq swap (gen cond)))",
        ] {
            let t = parse_term(src).unwrap();
            assert_eq!(t.to_string(), src);
            assert_eq!(parse_term(&t.to_string()).unwrap(), t);
        }
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_term("(seq id1\n  (gen xor))").unwrap_err();
        assert_eq!((e.line, e.col), (2, 8));
        assert!(e.message.contains("xor"));
        assert!(parse_term("(seq id1)").is_err());
        assert!(parse_term("(seq id1 id1").is_err());
        assert!(parse_term("id1 id1").is_err());
        assert!(parse_term("(gen state 2)").is_err());
        assert!(parse_term("(regrade (inj 1->1 [1]) knight)").is_err());
        assert!(parse_term("").is_err());
        assert!(parse_term(")").is_err());
    }
}
