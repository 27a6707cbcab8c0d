//! Element literals: `a/b`, `qadic(5; 2 + 1*5 + 3*5^2)`,
//! `laurent(3,1; t^-2 + 2*t)`, `comp(2; (1+t)*2^1)`.
//!
//! Bodies are arithmetic expressions in integers, `t` (series fields), `u`
//! (generator of `F_{p^k}`) and `O(b^k)` precision terms.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Element, Field, FieldKind};
use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiteralError {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for LiteralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for LiteralError {}

/// 1-based line and column of a byte offset.
pub fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    field: &'a Field,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, (usize, String)> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let s = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Int(text[s..i].parse().unwrap()), s));
        } else if c.is_ascii_alphabetic() {
            let s = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(text[s..i].to_string()), s));
        } else if "+-*/^(),;".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err((i, format!("unexpected character '{c}'")));
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

type PResult<T> = Result<T, (usize, String)>;

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            Err((self.offset(), format!("expected '{c}'")))
        }
    }

    fn int(&mut self) -> PResult<BigInt> {
        match self.bump() {
            Tok::Int(n) => Ok(n),
            _ => Err((self.toks[self.pos.saturating_sub(1)].1, "expected an integer".into())),
        }
    }

    fn small(&mut self) -> PResult<u64> {
        let at = self.offset();
        u64::try_from(self.int()?).map_err(|_| (at, "integer too large".into()))
    }

    fn signed_exponent(&mut self) -> PResult<i64> {
        let neg = if *self.peek() == Tok::Sym('-') {
            self.bump();
            true
        } else {
            false
        };
        let at = self.offset();
        let n = i64::try_from(self.int()?).map_err(|_| (at, "exponent too large".into()))?;
        Ok(if neg { -n } else { n })
    }

    fn arith<T>(&self, at: usize, r: crate::Result<T>) -> PResult<T> {
        r.map_err(|e: Error| (at, e.to_string()))
    }

    fn literal(&mut self) -> PResult<Element> {
        let at = self.offset();
        let head = match self.peek() {
            Tok::Ident(s) if ["qadic", "laurent", "comp"].contains(&s.as_str()) => Some(s.clone()),
            _ => None,
        };
        let value = if let Some(head) = head {
            self.bump();
            self.expect('(')?;
            let matches = match (head.as_str(), self.field.kind()) {
                ("qadic", FieldKind::QAdic { q }) => self.small()? == *q,
                ("comp", FieldKind::CompositeQAdicLaurent { q }) => self.small()? == *q,
                ("laurent", FieldKind::Laurent { p, k }) => {
                    let pp = self.small()?;
                    self.expect(',')?;
                    let kk = self.small()?;
                    pp == *p && kk == *k as u64
                }
                _ => false,
            };
            if !matches {
                return Err((at, format!("literal '{head}(...)' does not denote an element of {}", self.field)));
            }
            self.expect(';')?;
            let v = self.expr()?;
            self.expect(')')?;
            v
        } else {
            self.expr()?
        };
        if *self.peek() != Tok::End {
            return Err((self.offset(), "unexpected trailing input".into()));
        }
        Ok(value)
    }

    fn expr(&mut self) -> PResult<Element> {
        let mut acc = self.term()?;
        loop {
            let at = self.offset();
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    let r = self.term()?;
                    acc = self.arith(at, acc.add(&r))?;
                }
                Tok::Sym('-') => {
                    self.bump();
                    let r = self.term()?;
                    acc = self.arith(at, acc.sub(&r))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> PResult<Element> {
        let mut acc = self.unary()?;
        loop {
            let at = self.offset();
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    let r = self.unary()?;
                    acc = self.arith(at, acc.mul(&r))?;
                }
                Tok::Sym('/') => {
                    self.bump();
                    let r = self.unary()?;
                    acc = self.arith(at, acc.div(&r))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> PResult<Element> {
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Element> {
        let base = self.atom()?;
        if *self.peek() == Tok::Sym('^') {
            self.bump();
            let at = self.offset();
            let e = self.signed_exponent()?;
            return self.arith(at, base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<Element> {
        let at = self.offset();
        match self.bump() {
            Tok::Int(n) => self.arith(at, Element::from_rational(self.field, &BigRational::from_integer(n))),
            Tok::Ident(s) if s == "t" => self.arith(at, Element::t(self.field)),
            Tok::Ident(s) if s == "u" => self.arith(at, Element::generator(self.field)),
            Tok::Ident(s) if s == "O" => self.big_o(at),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::End => Err((at, "unexpected end of input".into())),
            other => Err((at, format!("unexpected token {other:?}"))),
        }
    }

    /// `O(t^k)`, `O(q^k)`, `O(t)` or `O(q)`.
    fn big_o(&mut self, at: usize) -> PResult<Element> {
        self.expect('(')?;
        let base_at = self.offset();
        let series = match self.bump() {
            Tok::Ident(s) if s == "t" => true,
            Tok::Int(n) => {
                if self.field.qadic_prime().map(BigInt::from) != Some(n) {
                    return Err((base_at, "precision term must be a power of the field prime".into()));
                }
                false
            }
            _ => return Err((base_at, "expected 't' or the field prime".into())),
        };
        let k = if *self.peek() == Tok::Sym('^') {
            self.bump();
            self.signed_exponent()?
        } else {
            1
        };
        self.expect(')')?;
        let r = if series {
            match self.field.kind() {
                FieldKind::Laurent { .. } | FieldKind::CompositeQAdicLaurent { .. } => Element::big_o(self.field, k),
                _ => Err(Error::Unsupported(format!("{} has no series variable", self.field))),
            }
        } else {
            Element::big_o_constant(self.field, k)
        };
        self.arith(at, r)
    }
}

/// Parses an element literal of `field`.
pub fn parse_element(field: &Field, text: &str) -> Result<Element, LiteralError> {
    let fail = |(offset, message): (usize, String)| {
        let (line, column) = position(text, offset);
        LiteralError { offset, line, column, message }
    };
    let toks = lex(text).map_err(fail)?;
    let mut p = Parser { toks, pos: 0, field };
    p.literal().map_err(fail)
}
