//! Dense univariate polynomials over a coefficient ring.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::finite_field::Fq;
use crate::error::Result;

/// Minimal ring interface shared by the coefficient domains.
///
/// Operations are fallible because truncated p-adic and series arithmetic can
/// run out of precision.
pub trait RingElement: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    /// Known to be exactly zero.
    fn is_zero_elem(&self) -> bool;
    fn add_elem(&self, other: &Self) -> Result<Self>;
    fn neg_elem(&self) -> Result<Self>;
    fn mul_elem(&self, other: &Self) -> Result<Self>;
    fn from_int_like(&self, n: i64) -> Self;

    fn sub_elem(&self, other: &Self) -> Result<Self> {
        self.add_elem(&other.neg_elem()?)
    }
}

impl RingElement for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_elem(&self, other: &Self) -> Result<Self> {
        Ok(self + other)
    }
    fn neg_elem(&self) -> Result<Self> {
        Ok(-self)
    }
    fn mul_elem(&self, other: &Self) -> Result<Self> {
        Ok(self * other)
    }
    fn from_int_like(&self, n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
}

impl RingElement for Fq {
    fn zero_like(&self) -> Self {
        Fq::zero_like(self)
    }
    fn one_like(&self) -> Self {
        Fq::one_like(self)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_elem(&self, other: &Self) -> Result<Self> {
        self.try_add(other)
    }
    fn neg_elem(&self) -> Result<Self> {
        Ok(self.neg())
    }
    fn mul_elem(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)
    }
    fn from_int_like(&self, n: i64) -> Self {
        self.field().from_i64(n)
    }
}

#[derive(Clone, PartialEq)]
pub struct Polynomial<T> {
    /// Low degree first; no trailing exact zeros.
    coeffs: Vec<T>,
}

impl<T: RingElement> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero_elem()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    /// Horner evaluation; `zero` supplies the ambient ring for the empty case.
    pub fn eval(&self, x: &T) -> Result<T> {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_elem(x)?.add_elem(c)?;
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Result<Self> {
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c.mul_elem(&c.from_int_like(i as i64))?);
        }
        Ok(Self::new(out))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add_elem(b)?,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Ok(Self::new(out))
    }

    pub fn neg(&self) -> Result<Self> {
        Ok(Self::new(
            self.coeffs.iter().map(|c| c.neg_elem()).collect::<Result<_>>()?,
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg()?)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self { coeffs: Vec::new() });
        }
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add_elem(&a.mul_elem(b)?)?;
            }
        }
        Ok(Self::new(out))
    }
}

impl<T: fmt::Display> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            let s = c.to_string();
            if s == "0" {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{s}")?,
                1 if s == "1" => write!(f, "x")?,
                1 => write!(f, "({s})*x")?,
                _ if s == "1" => write!(f, "x^{i}")?,
                _ => write!(f, "({s})*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<T: fmt::Display> fmt::Debug for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
