//! `q`-adic numbers with capped relative precision.
//!
//! A number is either an exact rational (as long as it came from exact input)
//! or an approximation `p^v * unit + O(p^{v + rel})`. Cancellation below the
//! available precision produces `Vanishing`, a value only known to be
//! divisible by `p^abs`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use super::Bound;
use crate::algebra::rational::{inv_mod, pow_rat, rat_mod, split, vp_int};
use crate::algebra::RingElement;
use crate::error::{exhausted, Error, Result};

#[derive(Debug, PartialEq, Eq)]
pub struct PAdicCtx {
    p: u64,
    prec: u32,
    pows: Vec<BigInt>,
}

impl PAdicCtx {
    pub fn new(p: u64, prec: u32) -> Arc<Self> {
        let mut pows = Vec::with_capacity(2 * prec as usize + 8);
        let mut acc = BigInt::one();
        for _ in 0..(2 * prec + 8) {
            pows.push(acc.clone());
            acc *= p;
        }
        Arc::new(Self { p, prec, pows })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn pow(&self, k: u32) -> BigInt {
        match self.pows.get(k as usize) {
            Some(x) => x.clone(),
            None => num_traits::pow(BigInt::from(self.p), k as usize),
        }
    }
}

#[derive(Clone, Debug)]
pub enum QRepr {
    Exact(BigRational),
    Approx { v: i64, unit: BigInt, rel: u32 },
    Vanishing { abs: i64 },
}

#[derive(Clone)]
pub struct QNum {
    ctx: Arc<PAdicCtx>,
    repr: QRepr,
}

impl QNum {
    pub fn exact(ctx: &Arc<PAdicCtx>, r: BigRational) -> Self {
        Self { ctx: ctx.clone(), repr: QRepr::Exact(r) }
    }

    pub fn from_i64(ctx: &Arc<PAdicCtx>, n: i64) -> Self {
        Self::exact(ctx, BigRational::from_integer(n.into()))
    }

    pub fn zero(ctx: &Arc<PAdicCtx>) -> Self {
        Self::from_i64(ctx, 0)
    }

    pub fn one(ctx: &Arc<PAdicCtx>) -> Self {
        Self::from_i64(ctx, 1)
    }

    /// `p^v * unit + O(p^{v + rel})`; `unit` is renormalized if divisible by `p`.
    pub fn approx(ctx: &Arc<PAdicCtx>, v: i64, unit: BigInt, rel: u32) -> Self {
        let m = ctx.pow(rel);
        let u = unit.mod_floor(&m);
        if u.is_zero() {
            return Self::vanishing(ctx, v + rel as i64);
        }
        let k = vp_int(&u, ctx.p) as u32;
        let rel = rel - k;
        let u = u / ctx.pow(k);
        let rel = rel.min(ctx.prec);
        let u = u.mod_floor(&ctx.pow(rel));
        Self { ctx: ctx.clone(), repr: QRepr::Approx { v: v + k as i64, unit: u, rel } }
    }

    pub fn vanishing(ctx: &Arc<PAdicCtx>, abs: i64) -> Self {
        Self { ctx: ctx.clone(), repr: QRepr::Vanishing { abs } }
    }

    pub fn ctx(&self) -> &Arc<PAdicCtx> {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p
    }

    pub fn repr(&self) -> &QRepr {
        &self.repr
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            QRepr::Exact(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.repr, QRepr::Exact(_))
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(&self.repr, QRepr::Exact(r) if r.is_zero())
    }

    /// Zero as far as the carried precision can tell.
    pub fn is_negligible(&self) -> bool {
        self.is_exact_zero() || matches!(self.repr, QRepr::Vanishing { .. })
    }

    pub fn bound(&self) -> Bound<i64> {
        match &self.repr {
            QRepr::Exact(r) => match split(r, self.ctx.p) {
                None => Bound::Infinite,
                Some((v, _)) => Bound::Exact(v),
            },
            QRepr::Approx { v, .. } => Bound::Exact(*v),
            QRepr::Vanishing { abs } => Bound::AtLeast(*abs),
        }
    }

    /// Exact valuation; `None` for zero.
    pub fn val(&self) -> Result<Option<i64>> {
        match self.bound() {
            Bound::Infinite => Ok(None),
            Bound::Exact(v) => Ok(Some(v)),
            Bound::AtLeast(a) => Err(exhausted(format!("value known only modulo {}^{a}", self.ctx.p))),
        }
    }

    /// Absolute precision; `None` when exact.
    pub fn abs_cap(&self) -> Option<i64> {
        match &self.repr {
            QRepr::Exact(_) => None,
            QRepr::Approx { v, rel, .. } => Some(v + *rel as i64),
            QRepr::Vanishing { abs } => Some(*abs),
        }
    }

    /// Relative precision; `None` when exact.
    pub fn rel(&self) -> Option<u32> {
        match &self.repr {
            QRepr::Exact(_) => None,
            QRepr::Approx { rel, .. } => Some(*rel),
            QRepr::Vanishing { .. } => Some(0),
        }
    }

    /// `(v, unit mod p^k)` for a nonzero number known to `k` relative digits.
    pub fn unit_digits(&self, k: u32) -> Result<(i64, BigInt)> {
        match &self.repr {
            QRepr::Exact(r) => {
                let (v, u) = split(r, self.ctx.p).ok_or(Error::ZeroInput)?;
                let m = self.ctx.pow(k);
                Ok((v, rat_mod(&u, &m).expect("unit is invertible")))
            }
            QRepr::Approx { v, unit, rel } => {
                if *rel < k {
                    return Err(exhausted(format!("{k} digits requested, {rel} known")));
                }
                Ok((*v, unit.mod_floor(&self.ctx.pow(k))))
            }
            QRepr::Vanishing { .. } => Err(exhausted("digits of an unresolved zero")),
        }
    }

    /// The same number with at most `rel` relative digits.
    pub fn truncate(&self, rel: u32) -> Self {
        match &self.repr {
            QRepr::Vanishing { .. } => self.clone(),
            QRepr::Exact(r) if r.is_zero() => self.clone(),
            _ => {
                let k = rel.min(self.rel().unwrap_or(u32::MAX));
                let (v, u) = self.unit_digits(k).expect("nonzero with enough digits");
                Self::approx(&self.ctx, v, u, k)
            }
        }
    }

    fn same(&self, other: &Self) -> Result<()> {
        if self.ctx.p == other.ctx.p {
            Ok(())
        } else {
            Err(Error::FieldMismatch(format!("Q_{} vs Q_{}", self.ctx.p, other.ctx.p)))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        if let (QRepr::Exact(a), QRepr::Exact(b)) = (&self.repr, &other.repr) {
            return Ok(Self::exact(&self.ctx, a + b));
        }
        let cap = match (self.abs_cap(), other.abs_cap()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => unreachable!(),
        };
        let mut terms = Vec::with_capacity(2);
        for x in [self, other] {
            if let Bound::Exact(v) = x.bound() {
                if v < cap {
                    let k = (cap - v) as u32;
                    terms.push(x.unit_digits(k.min(x.rel().unwrap_or(u32::MAX)))?);
                }
            }
        }
        let Some(vmin) = terms.iter().map(|t| t.0).min() else {
            return Ok(Self::vanishing(&self.ctx, cap));
        };
        let width = (cap - vmin) as u32;
        let mut s = BigInt::zero();
        for (v, u) in terms {
            s += u * self.ctx.pow((v - vmin) as u32);
        }
        Ok(Self::approx(&self.ctx, vmin, s, width))
    }

    pub fn neg(&self) -> Self {
        let repr = match &self.repr {
            QRepr::Exact(r) => QRepr::Exact(-r),
            QRepr::Approx { v, unit, rel } => QRepr::Approx {
                v: *v,
                unit: (-unit).mod_floor(&self.ctx.pow(*rel)),
                rel: *rel,
            },
            QRepr::Vanishing { abs } => QRepr::Vanishing { abs: *abs },
        };
        Self { ctx: self.ctx.clone(), repr }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        if let (QRepr::Exact(a), QRepr::Exact(b)) = (&self.repr, &other.repr) {
            return Ok(Self::exact(&self.ctx, a * b));
        }
        if self.is_exact_zero() || other.is_exact_zero() {
            return Ok(Self::zero(&self.ctx));
        }
        match (self.bound(), other.bound()) {
            (Bound::AtLeast(a), b) | (b, Bound::AtLeast(a)) => {
                let lb = match b {
                    Bound::Exact(v) | Bound::AtLeast(v) => v,
                    Bound::Infinite => unreachable!(),
                };
                Ok(Self::vanishing(&self.ctx, a + lb))
            }
            _ => {
                let rel = self.rel().unwrap_or(u32::MAX).min(other.rel().unwrap_or(u32::MAX));
                let (va, ua) = self.unit_digits(rel)?;
                let (vb, ub) = other.unit_digits(rel)?;
                Ok(Self::approx(&self.ctx, va + vb, ua * ub, rel))
            }
        }
    }

    pub fn inv(&self) -> Result<Self> {
        match &self.repr {
            QRepr::Exact(r) if r.is_zero() => Err(Error::DivisionByZero),
            QRepr::Exact(r) => Ok(Self::exact(&self.ctx, r.recip())),
            QRepr::Approx { v, unit, rel } => {
                let m = self.ctx.pow(*rel);
                let inv = inv_mod(unit, &m).expect("units are invertible");
                Ok(Self::approx(&self.ctx, -v, inv, *rel))
            }
            QRepr::Vanishing { .. } => Err(exhausted("inverting an unresolved zero")),
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut result = Self::one(&self.ctx);
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

    /// Multiplication by `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        match &self.repr {
            QRepr::Exact(r) => Self::exact(&self.ctx, r * pow_rat(self.ctx.p, k)),
            QRepr::Approx { v, unit, rel } => Self {
                ctx: self.ctx.clone(),
                repr: QRepr::Approx { v: v + k, unit: unit.clone(), rel: *rel },
            },
            QRepr::Vanishing { abs } => Self::vanishing(&self.ctx, abs + k),
        }
    }

    /// Image in `F_p`; requires nonnegative valuation.
    pub fn residue(&self) -> Result<u64> {
        match self.bound() {
            Bound::Infinite => Ok(0),
            Bound::AtLeast(a) if a >= 1 => Ok(0),
            Bound::AtLeast(_) => Err(exhausted("residue of an unresolved zero")),
            Bound::Exact(v) if v < 0 => Err(Error::NegativeValuation),
            Bound::Exact(v) if v > 0 => Ok(0),
            Bound::Exact(_) => Ok(self.unit_digits(1)?.1.to_u64().expect("digit fits")),
        }
    }

    /// Equality up to the precision carried by either side.
    pub fn eq_prec(&self, other: &Self) -> bool {
        self.ctx.p == other.ctx.p && self.sub(other).map(|d| d.is_negligible()).unwrap_or(false)
    }

    /// Random number with valuation drawn from `vals` and `prec` random unit digits.
    pub fn random<R: Rng + ?Sized>(
        ctx: &Arc<PAdicCtx>,
        rng: &mut R,
        vals: std::ops::RangeInclusive<i64>,
    ) -> Self {
        let v = rng.gen_range(vals);
        Self::approx(ctx, v, random_unit(ctx, rng, ctx.prec), ctx.prec)
    }

    /// Random exact rational `p^v * a / b` with `a`, `b` units of bounded height.
    pub fn random_exact<R: Rng + ?Sized>(
        ctx: &Arc<PAdicCtx>,
        rng: &mut R,
        vals: std::ops::RangeInclusive<i64>,
        height: i64,
    ) -> Self {
        let v = rng.gen_range(vals);
        Self::exact(ctx, random_unit_rational(ctx.p, rng, height) * pow_rat(ctx.p, v))
    }

    /// Teichmüller representative of a unit: the root of unity congruent to
    /// it modulo `p` (`1` when `p = 2`).
    pub fn teichmuller(&self) -> Result<Self> {
        let (v, u) = self.unit_digits(self.rel().unwrap_or(self.ctx.prec).min(self.ctx.prec))?;
        if v != 0 {
            return Err(Error::Unsupported("teichmuller of a non-unit".into()));
        }
        let k = self.rel().unwrap_or(self.ctx.prec).min(self.ctx.prec);
        let m = self.ctx.pow(k);
        let e = self.ctx.pow(k.saturating_sub(1));
        Ok(Self::approx(&self.ctx, 0, u.modpow(&e, &m), k))
    }
}

pub(crate) fn random_unit<R: Rng + ?Sized>(ctx: &PAdicCtx, rng: &mut R, digits: u32) -> BigInt {
    let p = ctx.p;
    let mut u = BigInt::from(rng.gen_range(1..p));
    let mut scale = BigInt::from(p);
    for _ in 1..digits {
        u += &scale * rng.gen_range(0..p);
        scale *= p;
    }
    u
}

pub(crate) fn random_unit_rational<R: Rng + ?Sized>(p: u64, rng: &mut R, height: i64) -> BigRational {
    loop {
        let a: i64 = rng.gen_range(-height..=height);
        let b: i64 = rng.gen_range(1..=height);
        if a == 0 || a.rem_euclid(p as i64) == 0 || b.rem_euclid(p as i64) == 0 {
            continue;
        }
        return BigRational::new(a.into(), b.into());
    }
}

/// Newton lifting of a simple root of `y^q = u` modulo `p^k`, `q` prime to `p`.
pub fn lift_root_tame(u: &BigInt, r0: u64, q: u64, p: u64, k: u32) -> BigInt {
    let m = num_traits::pow(BigInt::from(p), k as usize);
    let qb = BigInt::from(q);
    let mut y = BigInt::from(r0);
    for _ in 0..(2 * (32 - k.leading_zeros()) + 4) {
        let f = (y.modpow(&qb, &m) - u).mod_floor(&m);
        if f.is_zero() {
            break;
        }
        let fp = (&qb * y.modpow(&BigInt::from(q - 1), &m)).mod_floor(&m);
        let inv = inv_mod(&fp, &m).expect("derivative is a unit");
        y = (y - f * inv).mod_floor(&m);
    }
    y
}

/// Digit-by-digit `p`-th root of a principal unit `u` (with `u = 1 mod p^2`,
/// or `mod 8` when `p = 2`), returned modulo `p^k`.
pub fn lift_root_wild(u: &BigInt, p: u64, k: u32) -> BigInt {
    let pb = BigInt::from(p);
    let start = if p == 2 { 2 } else { 1 };
    let mut y = BigInt::one();
    let mut pj = num_traits::pow(pb.clone(), start as usize);
    for _j in start..k {
        let pj1 = &pj * &pb;
        let m = &pj1 * &pb;
        let diff = (u - y.modpow(&pb, &m)).mod_floor(&m);
        let d = (diff / &pj1).mod_floor(&pb);
        y += d * &pj;
        pj = pj1;
    }
    y
}

impl PartialEq for QNum {
    fn eq(&self, other: &Self) -> bool {
        self.eq_prec(other)
    }
}

impl fmt::Debug for QNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn power_term(d: &BigInt, p: u64, e: i64) -> String {
    let pw = match e {
        0 => String::new(),
        1 => format!("{p}"),
        _ => format!("{p}^{e}"),
    };
    match (d.is_one(), pw.is_empty()) {
        (_, true) => d.to_string(),
        (true, false) => pw,
        (false, false) => format!("{d}*{pw}"),
    }
}

impl fmt::Display for QNum {
    /// Exact numbers print as rationals, approximations as base-`p` digit
    /// expansions with an explicit `O(p^k)` tail.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.ctx.p;
        match &self.repr {
            QRepr::Exact(r) => write!(f, "{r}"),
            QRepr::Vanishing { abs } => write!(f, "O({p}^{abs})"),
            QRepr::Approx { v, unit, rel } => {
                let mut terms = Vec::new();
                let mut u = unit.clone();
                let pb = BigInt::from(p);
                let mut e = *v;
                while !u.is_zero() {
                    let (q, d) = u.div_mod_floor(&pb);
                    if !d.is_zero() {
                        terms.push(power_term(&d, p, e));
                    }
                    u = q;
                    e += 1;
                }
                terms.push(format!("O({p}^{})", v + *rel as i64));
                write!(f, "{}", terms.join(" + "))
            }
        }
    }
}

impl RingElement for QNum {
    fn zero_like(&self) -> Self {
        Self::zero(&self.ctx)
    }
    fn one_like(&self) -> Self {
        Self::one(&self.ctx)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_exact_zero()
    }
    fn add_elem(&self, other: &Self) -> Result<Self> {
        self.add(other)
    }
    fn neg_elem(&self) -> Result<Self> {
        Ok(self.neg())
    }
    fn mul_elem(&self, other: &Self) -> Result<Self> {
        self.mul(other)
    }
    fn from_int_like(&self, n: i64) -> Self {
        Self::from_i64(&self.ctx, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx(p: u64) -> Arc<PAdicCtx> {
        PAdicCtx::new(p, 32)
    }

    #[test]
    fn exact_valuations() {
        let c = ctx(5);
        assert_eq!(QNum::from_i64(&c, 50).val().unwrap(), Some(2));
        assert_eq!(QNum::zero(&c).val().unwrap(), None);
        assert_eq!(QNum::exact(&c, rat(1, 5)).residue(), Err(Error::NegativeValuation));
        assert_eq!(QNum::from_i64(&c, 7).residue().unwrap(), 2);
    }

    #[test]
    fn cancellation_is_reported() {
        let c = ctx(3);
        let x = QNum::from_i64(&c, 10).truncate(5);
        let d = x.sub(&QNum::from_i64(&c, 10)).unwrap();
        assert!(d.is_negligible());
        assert!(matches!(d.val(), Err(Error::PrecisionExhausted(_))));
        let y = x.sub(&QNum::from_i64(&c, 1)).unwrap();
        assert_eq!(y.val().unwrap(), Some(2));
        assert_eq!(y.rel(), Some(3));
    }

    #[test]
    fn teichmuller_examples() {
        let c = ctx(5);
        let w = QNum::from_i64(&c, 2).teichmuller().unwrap();
        assert_eq!(w.residue().unwrap(), 2);
        assert!(w.pow(4).unwrap().eq_prec(&QNum::one(&c)));
        assert!(QNum::from_i64(&c, 1).teichmuller().unwrap().eq_prec(&QNum::one(&c)));
        let c2 = ctx(2);
        assert!(QNum::from_i64(&c2, 3).teichmuller().unwrap().eq_prec(&QNum::one(&c2)));
    }

    #[test]
    fn root_lifting() {
        let p = 5;
        let m = num_traits::pow(BigInt::from(p), 20);
        let y = lift_root_tame(&BigInt::from(6), 1, 2, p, 20);
        assert_eq!(y.modpow(&BigInt::from(2), &m), BigInt::from(6));
        let z = lift_root_wild(&BigInt::from(26), 5, 20);
        assert_eq!(z.modpow(&BigInt::from(5), &(&m * 5)), BigInt::from(26));
        let m2 = num_traits::pow(BigInt::from(2), 30);
        let s = lift_root_wild(&BigInt::from(17), 2, 30);
        assert_eq!(s.modpow(&BigInt::from(2), &(&m2 * 2)), BigInt::from(17));
    }

    #[test]
    fn display_digits() {
        let c = ctx(5);
        let x = QNum::exact(&c, rat(2 + 5 + 3 * 25, 1)).truncate(4);
        assert_eq!(x.to_string(), "2 + 5 + 3*5^2 + O(5^4)");
        let y = QNum::exact(&c, rat(1, 5)).truncate(2);
        assert_eq!(y.to_string(), "5^-1 + O(5^1)");
    }

    proptest! {
        #[test]
        fn ultrametric(seed in any::<u64>(), which in 0usize..3) {
            let c = PAdicCtx::new([2, 3, 5][which], 64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = QNum::random(&c, &mut rng, -10..=10);
            let y = QNum::random(&c, &mut rng, -10..=10);
            let (vx, vy) = (x.val().unwrap().unwrap(), y.val().unwrap().unwrap());
            let s = x.add(&y).unwrap();
            match s.bound() {
                Bound::Exact(v) => {
                    prop_assert!(v >= vx.min(vy));
                    if vx != vy { prop_assert_eq!(v, vx.min(vy)); }
                }
                Bound::AtLeast(a) => prop_assert!(a >= vx.min(vy)),
                Bound::Infinite => prop_assert!(false),
            }
            prop_assert_eq!(x.mul(&y).unwrap().val().unwrap(), Some(vx + vy));
        }

        #[test]
        fn teichmuller_is_multiplicative(seed in any::<u64>(), which in 0usize..3) {
            let c = PAdicCtx::new([2, 3, 5][which], 64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = QNum::random(&c, &mut rng, 0..=0);
            let w = QNum::random(&c, &mut rng, 0..=0);
            let (tu, tw) = (u.teichmuller().unwrap(), w.teichmuller().unwrap());
            prop_assert!(tu.pow(c.p() as i64 - 1).unwrap().eq_prec(&QNum::one(&c)));
            prop_assert!(u.mul(&w).unwrap().teichmuller().unwrap().eq_prec(&tu.mul(&tw).unwrap()));
            prop_assert_eq!(tu.residue().unwrap(), u.residue().unwrap() % if c.p() == 2 { 2 } else { c.p() });
        }

        #[test]
        fn exact_and_approx_agree(a in -1000i64..1000, b in 1i64..1000, c0 in -1000i64..1000, d in 1i64..1000) {
            let c = PAdicCtx::new(3, 40);
            let x = QNum::exact(&c, rat(a, b));
            let y = QNum::exact(&c, rat(c0, d));
            let prod = x.mul(&y).unwrap();
            if a != 0 && c0 != 0 {
                let approx = x.truncate(40).mul(&y.truncate(40)).unwrap();
                prop_assert!(approx.eq_prec(&prod));
                prop_assert!(x.truncate(40).inv().unwrap().eq_prec(&x.inv().unwrap()));
            }
            prop_assert!(x.truncate(40).add(&y).unwrap().eq_prec(&x.add(&y).unwrap()));
        }
    }
}
