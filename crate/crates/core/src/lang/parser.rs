//! Concrete syntax.
//!
//! ```text
//! expr ::= let IDENT = expr in expr
//!        | if expr then expr else expr
//!        | app
//! app  ::= fst app | snd app | observe app | flip NUMBER | atom
//! atom ::= IDENT | knight | ◆ | ( expr ) | ( expr , expr )
//! ```
//!
//! `NUMBER` is an integer, fraction (`1/3`) or decimal (`0.25`). `#` starts a
//! comment. `let _ = e in ...` discards `e`'s value; `_` cannot be referenced.
//! `observe e` for a non-variable `e` is sugar for `let _obs = e in observe _obs`.

use thiserror::Error;

use super::Expr;
use crate::stoch::{check_probability, parse_rational};

/// Name bound by the `observe e` sugar.
pub(crate) const OBSERVE_TEMP: &str = "_obs";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Let,
    In,
    If,
    Then,
    Else,
    Fst,
    Snd,
    Observe,
    Flip,
    Knight,
    LParen,
    RParen,
    Comma,
    Eq,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(x) => format!("identifier `{x}`"),
            Tok::Number(n) => format!("number `{n}`"),
            Tok::Let => "`let`".into(),
            Tok::In => "`in`".into(),
            Tok::If => "`if`".into(),
            Tok::Then => "`then`".into(),
            Tok::Else => "`else`".into(),
            Tok::Fst => "`fst`".into(),
            Tok::Snd => "`snd`".into(),
            Tok::Observe => "`observe`".into(),
            Tok::Flip => "`flip`".into(),
            Tok::Knight => "`knight`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn position(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn error_at(src: &str, offset: usize, message: impl Into<String>) -> ParseError {
    let (line, col) = position(src, offset);
    ParseError {
        line,
        col,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut toks = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '#' {
            while chars.peek().is_some_and(|&(_, c)| c != '\n') {
                chars.next();
            }
        } else if c.is_ascii_digit() || c == '.' {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if d.is_ascii_digit() || d == '.' || d == '/' {
                    end = j + d.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            toks.push((Tok::Number(src[i..end].to_string()), i));
        } else if c.is_alphabetic() || c == '_' {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if d.is_alphanumeric() || d == '_' || d == '\'' {
                    end = j + d.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            let word = &src[i..end];
            let tok = match word {
                "let" => Tok::Let,
                "in" => Tok::In,
                "if" => Tok::If,
                "then" => Tok::Then,
                "else" => Tok::Else,
                "fst" => Tok::Fst,
                "snd" => Tok::Snd,
                "observe" => Tok::Observe,
                "flip" => Tok::Flip,
                "knight" => Tok::Knight,
                _ => Tok::Ident(word.to_string()),
            };
            toks.push((tok, i));
        } else {
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '=' => Tok::Eq,
                '◆' => Tok::Knight,
                other => return Err(error_at(src, i, format!("unexpected character `{other}`"))),
            };
            toks.push((tok, i));
            chars.next();
        }
    }
    toks.push((Tok::Eof, src.len()));
    Ok(toks)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        error_at(self.src, self.toks[self.pos].1, message)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.err(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn binder(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(x) => {
                self.bump();
                Ok(x)
            }
            _ => Err(self.unexpected("a variable name")),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Let => {
                self.bump();
                let x = self.binder()?;
                self.expect(Tok::Eq)?;
                let bound = self.expr()?;
                self.expect(Tok::In)?;
                let body = self.expr()?;
                Ok(Expr::let_(&x, bound, body))
            }
            Tok::If => {
                self.bump();
                let g = self.expr()?;
                self.expect(Tok::Then)?;
                let t = self.expr()?;
                self.expect(Tok::Else)?;
                let e = self.expr()?;
                Ok(Expr::if_(g, t, e))
            }
            _ => self.app(),
        }
    }

    fn app(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Fst => {
                self.bump();
                Ok(Expr::fst(self.app()?))
            }
            Tok::Snd => {
                self.bump();
                Ok(Expr::snd(self.app()?))
            }
            Tok::Observe => {
                self.bump();
                match self.app()? {
                    Expr::Var(x) => Ok(Expr::Observe(x)),
                    e => Ok(Expr::let_(OBSERVE_TEMP, e, Expr::observe(OBSERVE_TEMP))),
                }
            }
            Tok::Flip => {
                self.bump();
                let Tok::Number(text) = self.peek().clone() else {
                    return Err(self.unexpected("a probability"));
                };
                let p = parse_rational(&text)
                    .and_then(|p| check_probability(&p).map(|_| p))
                    .map_err(|e| self.err(e.to_string()))?;
                self.bump();
                Ok(Expr::Flip(p))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Ident(x) if x == "_" => Err(self.err("`_` cannot be used as a value")),
            Tok::Ident(x) => {
                self.bump();
                Ok(Expr::Var(x))
            }
            Tok::Knight => {
                self.bump();
                Ok(Expr::Knight)
            }
            Tok::LParen => {
                self.bump();
                let first = self.expr()?;
                match self.peek() {
                    Tok::Comma => {
                        self.bump();
                        let second = self.expr()?;
                        self.expect(Tok::RParen)?;
                        Ok(Expr::pair(first, second))
                    }
                    Tok::RParen => {
                        self.bump();
                        Ok(first)
                    }
                    _ => Err(self.unexpected("`,` or `)`")),
                }
            }
            _ => Err(self.unexpected("an expression")),
        }
    }
}

/// Parses a whole program.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { src, toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected("end of input"));
    }
    Ok(e)
}
