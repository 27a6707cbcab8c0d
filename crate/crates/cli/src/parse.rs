//! Text specs for fields, subgroups and elements.
//!
//! A spec line is whitespace separated: a field, then optionally a subgroup,
//! then element literals (each optionally prefixed by `name=`). Whitespace
//! inside brackets does not split.

use std::fmt;

use valring::algebra::finite_field::is_prime;
use valring::algebra::Gamma;
use valring::fields::literal::{parse_element, position};
use valring::fields::{Element, Field, FieldDescriptor, DEFAULT_PRECISION};
use valring::lattice::{FractionalIdealCut, ValuationRingRef};
use valring::subgroups::SubgroupDescriptor;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecError {
    /// Malformed text, with a 1-based position.
    Parse { line: usize, column: usize, message: String },
    /// Well formed but meaningless, like `as(2)` over a field of characteristic 0.
    Semantic { message: String },
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Parse { line, column, message } => write!(f, "parse error at {line}:{column}: {message}"),
            Self::Semantic { message } => write!(f, "semantic error: {message}"),
        }
    }
}

impl std::error::Error for SpecError {}

fn semantic(message: impl fmt::Display) -> SpecError {
    SpecError::Semantic { message: message.to_string() }
}

/// A parsed spec line.
#[derive(Debug, Clone)]
pub struct Specs {
    pub field: Field,
    pub subgroup: Option<SubgroupDescriptor>,
    pub elements: Vec<NamedElement>,
}

#[derive(Debug, Clone)]
pub struct NamedElement {
    pub name: Option<String>,
    pub element: Element,
}

impl Specs {
    pub fn descriptor(&self) -> &FieldDescriptor {
        self.field.descriptor()
    }
}

/// Cursor over one token, reporting errors at absolute offsets of `text`.
struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    end: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, start: usize, end: usize) -> Self {
        Self { text, pos: start, end }
    }

    fn err(&self, at: usize, message: impl Into<String>) -> SpecError {
        let (line, column) = position(self.text, at);
        SpecError::Parse { line, column, message: message.into() }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..self.end]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.end - trimmed.len();
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), SpecError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(self.pos, format!("expected `{s}`")))
        }
    }

    fn int(&mut self) -> Result<i64, SpecError> {
        self.skip_ws();
        let start = self.pos;
        let neg = self.eat("-");
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.err(self.pos, "expected an integer"));
        }
        let s = &self.rest()[..digits];
        self.pos += digits;
        let n: i64 = s.parse().map_err(|_| self.err(start, "integer out of range"))?;
        Ok(if neg { -n } else { n })
    }

    fn natural(&mut self) -> Result<u64, SpecError> {
        self.skip_ws();
        let start = self.pos;
        let n = self.int()?;
        u64::try_from(n).map_err(|_| self.err(start, "expected a nonnegative integer"))
    }

    fn finish(&mut self) -> Result<(), SpecError> {
        self.skip_ws();
        if self.pos < self.end {
            Err(self.err(self.pos, format!("unexpected `{}`", self.rest())))
        } else {
            Ok(())
        }
    }
}

/// Splits at top-level whitespace, returning byte ranges.
fn split_tokens(text: &str) -> Result<Vec<(usize, usize)>, SpecError> {
    let mut out = Vec::new();
    let mut depth: Vec<(char, usize)> = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match c {
            '(' | '[' => depth.push((c, i)),
            ')' | ']' => {
                let want = if c == ')' { '(' } else { '[' };
                match depth.pop() {
                    Some((open, _)) if open == want => {}
                    _ => {
                        let (line, column) = position(text, i);
                        return Err(SpecError::Parse { line, column, message: format!("unbalanced `{c}`") });
                    }
                }
            }
            _ => {}
        }
        if c.is_whitespace() && depth.is_empty() {
            if let Some(s) = start.take() {
                out.push((s, i));
            }
        } else if start.is_none() && !c.is_whitespace() {
            start = Some(i);
        }
    }
    if let Some((open, at)) = depth.pop() {
        let (line, column) = position(text, at);
        return Err(SpecError::Parse { line, column, message: format!("unclosed `{open}`") });
    }
    if let Some(s) = start {
        out.push((s, text.len()));
    }
    Ok(out)
}

fn parse_prec(c: &mut Cursor, default_prec: u32) -> Result<u32, SpecError> {
    if c.eat(":prec=") {
        let at = c.pos;
        let n = c.natural()?;
        u32::try_from(n).map_err(|_| c.err(at, "precision out of range"))
    } else {
        Ok(default_prec)
    }
}

fn field_at(text: &str, start: usize, end: usize, default_prec: u32) -> Result<Field, SpecError> {
    let mut c = Cursor::new(text, start, end);
    let desc = if c.eat("Qp:") {
        let q = c.natural()?;
        FieldDescriptor::qadic(q, parse_prec(&mut c, default_prec)?)
    } else if c.eat("Laurent:") {
        let p = c.natural()?;
        c.expect("^")?;
        let at = c.pos;
        let k = u32::try_from(c.natural()?).map_err(|_| c.err(at, "degree out of range"))?;
        FieldDescriptor::laurent(p, k, parse_prec(&mut c, default_prec)?)
    } else if c.eat("Comp:") {
        let q = c.natural()?;
        FieldDescriptor::composite(q, parse_prec(&mut c, default_prec)?)
    } else if c.eat("Q[") {
        let mut primes = Vec::new();
        if !c.eat("]") {
            loop {
                primes.push(c.natural()?);
                if c.eat("]") {
                    break;
                }
                c.expect(",")?;
            }
        }
        for (i, p) in primes.iter().enumerate() {
            if !is_prime(*p) {
                return Err(semantic(format!("{p} is not prime")));
            }
            if primes[..i].contains(p) {
                return Err(semantic(format!("prime {p} listed twice")));
            }
        }
        let mut d = FieldDescriptor::rationals(&primes);
        d.precision = parse_prec(&mut c, default_prec)?;
        d
    } else {
        return Err(c.err(start, "expected a field: Q[..], Qp:q, Laurent:p^k or Comp:q"));
    };
    c.finish()?;
    Field::new(desc).map_err(semantic)
}

fn gamma(c: &mut Cursor) -> Result<Gamma, SpecError> {
    if c.eat("(") {
        let a = c.int()?;
        c.expect(",")?;
        let b = c.int()?;
        c.expect(")")?;
        Ok(Gamma::pair(a, b))
    } else {
        Ok(Gamma::int(c.int()?))
    }
}

/// The ring an `ideal(..)` subgroup lives on: the field's natural valuation.
fn natural_ring(field: &Field) -> Result<ValuationRingRef, SpecError> {
    let stage = field.natural_stage();
    ValuationRingRef::chain(field)
        .into_iter()
        .find(|o| o.stage() == stage && !o.is_trivial())
        .ok_or_else(|| semantic(format!("{field} carries no nontrivial valuation for ideal(..)")))
}

fn subgroup_at(text: &str, start: usize, end: usize, field: &Field) -> Result<SubgroupDescriptor, SpecError> {
    let mut c = Cursor::new(text, start, end);
    let g = if c.eat("pow(") {
        let q = c.natural()?;
        c.expect(")")?;
        SubgroupDescriptor::PowerGroup { q }
    } else if c.eat("as(") {
        let p = c.natural()?;
        c.expect(")")?;
        SubgroupDescriptor::ArtinSchreier { p }
    } else if c.eat("ideal(") {
        let strict = if c.eat(">=") {
            false
        } else {
            c.expect(">")?;
            true
        };
        let at = c.pos;
        let bound = gamma(&mut c)?;
        c.expect(")")?;
        let ring = natural_ring(field)?;
        if bound.rank() != Some(ring.coord_rank()) {
            return Err(c.err(at, format!("{} needs a value of rank {}", ring.name(), ring.coord_rank())));
        }
        let cut = if strict { FractionalIdealCut::greater(&ring, bound) } else { FractionalIdealCut::at_least(&ring, bound) };
        SubgroupDescriptor::IdealGroup { cut: cut.map_err(semantic)? }
    } else {
        return Err(c.err(start, "expected a subgroup: pow(q), as(p), ideal(>=g) or ideal(>g)"));
    };
    c.finish()?;
    g.validate(field).map_err(semantic)?;
    Ok(g)
}

fn is_subgroup(token: &str) -> bool {
    ["pow(", "as(", "ideal("].iter().any(|p| token.starts_with(p))
}

/// Splits an optional `name=` prefix off an element token.
fn element_name(token: &str) -> Option<(&str, usize)> {
    let eq = token.find('=')?;
    let name = &token[..eq];
    let ident = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    ident.then_some((name, eq + 1))
}

fn element_at(text: &str, start: usize, end: usize, field: &Field) -> Result<NamedElement, SpecError> {
    let token = &text[start..end];
    let (name, skip) = match element_name(token) {
        Some((n, skip)) => (Some(n.to_string()), skip),
        None => (None, 0),
    };
    let body = &token[skip..];
    let element = parse_element(field, body).map_err(|e| {
        let (line, column) = position(text, start + skip + e.offset);
        SpecError::Parse { line, column, message: e.message }
    })?;
    Ok(NamedElement { name, element })
}

/// Parses a field spec alone.
pub fn parse_field(text: &str, default_prec: u32) -> Result<Field, SpecError> {
    let toks = split_tokens(text)?;
    match toks.as_slice() {
        [(s, e)] => field_at(text, *s, *e, default_prec),
        [] => Err(SpecError::Parse { line: 1, column: 1, message: "missing field".into() }),
        [_, (s, _), ..] => {
            let (line, column) = position(text, *s);
            Err(SpecError::Parse { line, column, message: "unexpected text after the field".into() })
        }
    }
}

/// Parses `field [subgroup] [elements..]` with the default precision.
pub fn parse_specs(text: &str) -> Result<Specs, SpecError> {
    parse_specs_with(text, DEFAULT_PRECISION)
}

/// Like [`parse_specs`]; `default_prec` applies when the field has no `:prec=`.
pub fn parse_specs_with(text: &str, default_prec: u32) -> Result<Specs, SpecError> {
    let toks = split_tokens(text)?;
    let Some(&(s, e)) = toks.first() else {
        return Err(SpecError::Parse { line: 1, column: 1, message: "missing field".into() });
    };
    let field = field_at(text, s, e, default_prec)?;
    let mut rest = &toks[1..];
    let mut subgroup = None;
    if let Some(&(s, e)) = rest.first() {
        if is_subgroup(&text[s..e]) {
            subgroup = Some(subgroup_at(text, s, e, &field)?);
            rest = &rest[1..];
        }
    }
    let elements = rest.iter().map(|&(s, e)| element_at(text, s, e, &field)).collect::<Result<_, _>>()?;
    Ok(Specs { field, subgroup, elements })
}
