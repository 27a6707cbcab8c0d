//! Truncated Laurent series `sum c_i t^i + O(t^prec)` over a coefficient field.
//!
//! `prec = None` marks an exact Laurent polynomial.

use std::fmt;

use super::Bound;
use crate::algebra::{Fq, RingElement};
use crate::error::{exhausted, Error, Result};
use crate::fields::padic::QNum;

pub trait Coef: RingElement + fmt::Display {
    /// Zero as far as the carried precision can tell.
    fn is_negligible(&self) -> bool;
    fn inv_coef(&self) -> Result<Self>;
}

impl Coef for Fq {
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
    fn inv_coef(&self) -> Result<Self> {
        self.inv()
    }
}

impl Coef for QNum {
    fn is_negligible(&self) -> bool {
        QNum::is_negligible(self)
    }
    fn inv_coef(&self) -> Result<Self> {
        self.inv()
    }
}

#[derive(Clone)]
pub struct Series<C> {
    zero: C,
    /// Relative precision budget used when an operation must truncate.
    cap: u32,
    start: i64,
    coeffs: Vec<C>,
    prec: Option<i64>,
}

impl<C: Coef> Series<C> {
    pub fn new(zero: C, cap: u32, start: i64, coeffs: Vec<C>, prec: Option<i64>) -> Self {
        let mut s = Self { zero, cap, start, coeffs, prec };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if let Some(p) = self.prec {
            let keep = (p - self.start).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero_elem()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.start += lead as i64;
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero_elem()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.start = self.prec.unwrap_or(0);
        }
    }

    pub fn zero(zero: C, cap: u32) -> Self {
        Self::new(zero, cap, 0, Vec::new(), None)
    }

    pub fn constant(c: C, cap: u32) -> Self {
        Self::monomial(c, 0, cap)
    }

    pub fn monomial(c: C, e: i64, cap: u32) -> Self {
        Self::new(c.zero_like(), cap, e, vec![c], None)
    }

    /// `O(t^k)`.
    pub fn big_o(zero: C, cap: u32, k: i64) -> Self {
        Self::new(zero, cap, k, Vec::new(), Some(k))
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn zero_coef(&self) -> &C {
        &self.zero
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn prec(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// Coefficient of `t^e` (zero outside the stored range).
    pub fn coeff(&self, e: i64) -> C {
        if e < self.start {
            return self.zero.clone();
        }
        self.coeffs
            .get((e - self.start) as usize)
            .cloned()
            .unwrap_or_else(|| self.zero.clone())
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec.is_none()
    }

    pub fn is_negligible(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_negligible())
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.first()
    }

    /// Lower bound for the `t`-adic order, exact when the leading coefficient
    /// is known to be nonzero.
    pub fn bound(&self) -> Bound<i64> {
        match self.coeffs.first() {
            None => match self.prec {
                None => Bound::Infinite,
                Some(p) => Bound::AtLeast(p),
            },
            Some(c) if c.is_negligible() => Bound::AtLeast(self.start),
            Some(_) => Bound::Exact(self.start),
        }
    }

    /// `t`-adic order; `None` for zero.
    pub fn val(&self) -> Result<Option<i64>> {
        match self.bound() {
            Bound::Infinite => Ok(None),
            Bound::Exact(v) => Ok(Some(v)),
            Bound::AtLeast(_) => Err(exhausted("leading coefficient of a series is unresolved")),
        }
    }

    fn lower(&self) -> i64 {
        match self.bound() {
            Bound::Exact(v) | Bound::AtLeast(v) => v,
            Bound::Infinite => i64::MAX / 4,
        }
    }

    /// Relative precision; `None` when exact.
    pub fn rel(&self) -> Option<i64> {
        self.prec.map(|p| p - self.lower().min(p))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let prec = match (self.prec, other.prec) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        if self.coeffs.is_empty() && other.coeffs.is_empty() {
            return Ok(Self::new(self.zero.clone(), self.cap, 0, Vec::new(), prec));
        }
        let lo = match (self.coeffs.is_empty(), other.coeffs.is_empty()) {
            (true, _) => other.start,
            (_, true) => self.start,
            _ => self.start.min(other.start),
        };
        let hi_a = self.start + self.coeffs.len() as i64;
        let hi_b = other.start + other.coeffs.len() as i64;
        let mut hi = hi_a.max(hi_b);
        if let Some(p) = prec {
            hi = hi.min(p);
        }
        let mut out = Vec::with_capacity((hi - lo).max(0) as usize);
        for e in lo..hi {
            out.push(self.coeff(e).add_elem(&other.coeff(e))?);
        }
        Ok(Self::new(self.zero.clone(), self.cap, lo, out, prec))
    }

    pub fn neg(&self) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|c| c.neg_elem()).collect::<Result<_>>()?;
        Ok(Self::new(self.zero.clone(), self.cap, self.start, coeffs, self.prec))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg()?)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Ok(Self::zero(self.zero.clone(), self.cap));
        }
        let (la, lb) = (self.lower(), other.lower());
        let prec = match (self.prec, other.prec) {
            (None, None) => None,
            (Some(a), None) => Some(a + lb),
            (None, Some(b)) => Some(b + la),
            (Some(a), Some(b)) => Some((a + lb).min(b + la)),
        };
        let start = self.start + other.start;
        let mut len = (self.coeffs.len() + other.coeffs.len()).saturating_sub(1);
        if let Some(p) = prec {
            len = len.min((p - start).max(0) as usize);
        }
        let mut out = vec![self.zero.clone(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len || a.is_zero_elem() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                out[i + j] = out[i + j].add_elem(&a.mul_elem(b)?)?;
            }
        }
        Ok(Self::new(self.zero.clone(), self.cap, start, out, prec))
    }

    pub fn scale(&self, c: &C) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|x| x.mul_elem(c)).collect::<Result<_>>()?;
        Ok(Self::new(self.zero.clone(), self.cap, self.start, coeffs, self.prec))
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self::new(
            self.zero.clone(),
            self.cap,
            self.start + k,
            self.coeffs.clone(),
            self.prec.map(|p| p + k),
        )
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_exact_zero() {
            return Err(Error::DivisionByZero);
        }
        let v = self.val()?.expect("nonzero");
        let lead_inv = self.coeffs[0].inv_coef()?;
        if self.prec.is_none() && self.coeffs.len() == 1 {
            return Ok(Self::monomial(lead_inv, -v, self.cap));
        }
        let n = match self.rel() {
            Some(r) => (r as usize).min(self.cap as usize),
            None => self.cap as usize,
        };
        let mut b: Vec<C> = Vec::with_capacity(n);
        b.push(lead_inv.clone());
        for k in 1..n {
            let mut acc = self.zero.clone();
            for i in 1..=k.min(self.coeffs.len() - 1) {
                if self.coeffs[i].is_zero_elem() {
                    continue;
                }
                acc = acc.add_elem(&self.coeffs[i].mul_elem(&b[k - i])?)?;
            }
            b.push(acc.mul_elem(&lead_inv)?.neg_elem()?);
        }
        Ok(Self::new(self.zero.clone(), self.cap, -v, b, Some(-v + n as i64)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut result = Self::constant(self.zero.one_like(), self.cap);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&b)?;
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b)?;
            }
        }
        Ok(result)
    }

    /// Drops everything from `t^k` on, recording `O(t^k)`.
    pub fn truncate_at(&self, k: i64) -> Self {
        let prec = Some(self.prec.map_or(k, |p| p.min(k)));
        Self::new(self.zero.clone(), self.cap, self.start, self.coeffs.clone(), prec)
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> Result<C>) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<_>>()?;
        Ok(Self::new(self.zero.clone(), self.cap, self.start, coeffs, self.prec))
    }

    pub fn eq_prec(&self, other: &Self) -> bool {
        self.sub(other).map(|d| d.is_negligible()).unwrap_or(false)
    }

    /// Nonzero terms as `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero_elem())
            .map(move |(i, c)| (self.start + i as i64, c))
    }
}

impl<C: Coef> PartialEq for Series<C> {
    fn eq(&self, other: &Self) -> bool {
        self.eq_prec(other)
    }
}

impl<C: Coef> fmt::Debug for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn needs_parens(s: &str) -> bool {
    s.contains(['+', '-', '/', ' ']) && !(s.starts_with('(') && s.ends_with(')'))
}

impl<C: Coef> fmt::Display for Series<C> {
    /// `c*t^e` terms joined by ` + `, with an `O(t^k)` tail when inexact.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (e, c) in self.terms() {
            let cs = c.to_string();
            let cs = if needs_parens(&cs) { format!("({cs})") } else { cs };
            let tp = match e {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{e}"),
            };
            parts.push(match (cs.as_str(), tp.is_empty()) {
                (_, true) => cs,
                ("1", false) => tp,
                (_, false) => format!("{cs}*{tp}"),
            });
        }
        if let Some(p) = self.prec {
            parts.push(format!("O(t^{p})"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FiniteField;

    fn f3() -> std::sync::Arc<FiniteField> {
        FiniteField::new(3, 1).unwrap()
    }

    fn poly(c: &[i64], start: i64) -> Series<Fq> {
        let f = f3();
        Series::new(f.zero(), 16, start, c.iter().map(|&x| f.from_i64(x)).collect(), None)
    }

    #[test]
    fn valuation_of_leading_term() {
        let s = poly(&[1, 0, 0, 0, 1], -3);
        assert_eq!(s.val().unwrap(), Some(-3));
        assert_eq!(Series::zero(f3().zero(), 16).val().unwrap(), None);
    }

    #[test]
    fn inverse_of_one_plus_t() {
        let s = poly(&[1, 1], 0);
        let inv = s.inv().unwrap();
        assert_eq!(inv.prec(), Some(16));
        assert!(inv.mul(&s).unwrap().eq_prec(&poly(&[1], 0)));
        // 1/(1+t) = 1 - t + t^2 - ...
        assert_eq!(inv.coeff(5), f3().from_i64(-1));
    }

    #[test]
    fn precision_propagates() {
        let a = poly(&[1, 2], 0).truncate_at(4);
        let b = poly(&[1], 2);
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod.prec(), Some(6));
        let d = a.sub(&a).unwrap();
        assert!(d.is_negligible());
        assert!(d.val().is_err());
    }

    #[test]
    fn display() {
        assert_eq!(poly(&[1, 0, 0, 2], -2).to_string(), "t^-2 + 2*t");
        assert_eq!(poly(&[1, 1], 0).truncate_at(3).to_string(), "1 + t + O(t^3)");
    }
}
