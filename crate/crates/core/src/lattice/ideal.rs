//! Fractional ideals of chain rings as cuts `{v > g}` / `{v >= g}` in the
//! value group.

use std::cmp::Ordering;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ring::ValuationRingRef;
use crate::algebra::Gamma;
use crate::error::{exhausted, Error, Result};
use crate::fields::sample::{random_in_cut, Mode};
use crate::fields::Element;

/// Second coordinate standing in for `-inf` in rank two: the cut
/// `{v >= (a, NEG_INF)}` is "first coordinate at least `a`", the ideals that
/// come from the coarser `t`-adic stage.
pub const NEG_INF: i64 = i64::MIN / 4;

pub(crate) fn is_unbounded(c: i64) -> bool {
    c.unsigned_abs() >= (i64::MAX / 8) as u64
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalIdealCut {
    pub ring: ValuationRingRef,
    pub bound: Gamma,
    pub strict: bool,
}

impl FractionalIdealCut {
    pub fn new(ring: &ValuationRingRef, bound: Gamma, strict: bool) -> Result<Self> {
        if let Some(r) = bound.rank() {
            if r != ring.coord_rank() {
                return Err(Error::RankMismatch(r, ring.coord_rank()));
            }
        }
        Ok(Self { ring: ring.clone(), bound, strict }.canonical())
    }

    pub fn at_least(ring: &ValuationRingRef, bound: Gamma) -> Result<Self> {
        Self::new(ring, bound, false)
    }

    pub fn greater(ring: &ValuationRingRef, bound: Gamma) -> Result<Self> {
        Self::new(ring, bound, true)
    }

    /// The ring itself, `{v >= 0}`.
    pub fn whole_ring(ring: &ValuationRingRef) -> Self {
        Self::at_least(ring, Gamma::zero(ring.coord_rank())).unwrap()
    }

    /// The maximal ideal `{v > 0}`.
    pub fn maximal(ring: &ValuationRingRef) -> Self {
        Self::greater(ring, Gamma::zero(ring.coord_rank())).unwrap()
    }

    pub fn zero_ideal(ring: &ValuationRingRef) -> Self {
        Self { ring: ring.clone(), bound: Gamma::Infinity, strict: false }
    }

    /// Non-strict form; the value groups here are discrete, and the trivial
    /// ring only has the ideals `{0}` and `K`.
    fn canonical(self) -> Self {
        let Self { ring, bound, strict } = self;
        if bound.is_infinite() {
            return Self { ring, bound, strict: false };
        }
        if ring.is_trivial() {
            let everything = if strict { bound.is_negative() } else { !bound.is_positive() };
            let bound = if everything { Gamma::int(0) } else { Gamma::Infinity };
            return Self { ring, bound, strict: false };
        }
        let bound = if strict { bound.succ() } else { bound };
        Self { ring, bound, strict: false }
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.bound.is_infinite()
    }

    /// Is the cut contained in the ring (an integral ideal)?
    pub fn is_integral(&self) -> bool {
        !self.bound.is_negative()
    }

    pub fn is_proper(&self) -> bool {
        self.bound.is_positive()
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    /// Inclusion order: `Less` means `self` is strictly smaller.
    pub fn compare(&self, other: &Self) -> Result<Ordering> {
        self.same_ring(other)?;
        Ok(other.bound.compare(&self.bound)?)
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        Ok(self.compare(other)? != Ordering::Greater)
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(if self.is_subset(other)? { other.clone() } else { self.clone() })
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let bound = add_bounds(&self.bound, &other.bound)?;
        Self::new(&self.ring, bound, false)
    }

    /// `sqrt(A)` for an integral ideal.
    pub fn radical(&self) -> Result<Self> {
        if !self.is_integral() {
            return Err(Error::NotAnIdeal);
        }
        if self.is_zero_ideal() || !self.is_proper() {
            return Ok(self.clone());
        }
        match self.bound.as_pair() {
            // Some power of every element with positive first coordinate
            // lands in A; nothing of value (0, b) does.
            Some((a, _)) if a > 0 => Self::new(&self.ring, Gamma::pair(1, NEG_INF), false),
            _ => Ok(Self::maximal(&self.ring)),
        }
    }

    pub fn contains_value(&self, v: &Gamma) -> bool {
        v.ge(&self.bound)
    }

    pub fn member(&self, x: &Element) -> Result<bool> {
        x.val_at_least(self.ring.stage(), &self.bound, false)
            .ok_or_else(|| exhausted(format!("cannot place {x} relative to {self}")))
    }

    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R, mode: Mode) -> Element {
        random_in_cut(self.ring.field(), self.ring.stage(), &self.bound, false, rng, mode)
    }
}

fn add_bounds(a: &Gamma, b: &Gamma) -> Result<Gamma> {
    let s = a.add(b)?;
    // Keep the unbounded marker from drifting.
    Ok(match s.as_pair() {
        Some((x, y)) if is_unbounded(y) => Gamma::pair(x, if y < 0 { NEG_INF } else { -NEG_INF }),
        _ => s,
    })
}

impl fmt::Display for FractionalIdealCut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero_ideal() {
            return write!(f, "{{0}}");
        }
        match self.bound.as_pair() {
            Some((a, c)) if is_unbounded(c) => {
                if c < 0 {
                    write!(f, "{{v >= ({a},-inf)}}")
                } else {
                    write!(f, "{{v >= ({},-inf)}}", a + 1)
                }
            }
            _ => write!(f, "{{v >= {}}}", self.bound),
        }
    }
}

impl Serialize for FractionalIdealCut {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Outcome of a sampled closure check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledCheck {
    pub name: String,
    pub trials: usize,
    pub seed: u64,
    pub failures: Vec<String>,
}

impl SampledCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `1 + A` is a multiplicative group: products and inverses stay inside.
pub fn one_plus_ideal_group_check(a: &FractionalIdealCut, trials: usize, seed: u64) -> Result<SampledCheck> {
    if !a.is_proper() {
        return Err(Error::NotAnIdeal);
    }
    let field = a.ring.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = Element::one(field);
    let mut failures = Vec::new();
    for _ in 0..trials {
        let x = one.add(&a.sample(&mut rng, Mode::Exact))?;
        let y = one.add(&a.sample(&mut rng, Mode::Exact))?;
        let xy = x.mul(&y)?.sub(&one)?;
        if !a.member(&xy)? {
            failures.push(format!("{x} * {y}"));
        }
        let xi = x.inv()?.sub(&one)?;
        if !a.member(&xi)? {
            failures.push(format!("1/{x}"));
        }
    }
    Ok(SampledCheck { name: "one_plus_ideal_group".into(), trials, seed, failures })
}

/// For `0 != a in A` and `x` with `x^{-1} not in A`: `(x - a^{-1})^{-1} in A`.
pub fn shift_inverse_check(a: &FractionalIdealCut, trials: usize, seed: u64) -> Result<SampledCheck> {
    let field = a.ring.field();
    let stage = a.ring.stage();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let vacuous = a.is_zero_ideal() || a.ring.is_trivial();
    if !vacuous {
        let neg = a.bound.neg().expect("finite bound");
        for _ in 0..trials {
            let av = a.sample(&mut rng, Mode::Approx);
            if av.is_zero() {
                continue;
            }
            // x^{-1} outside A means v(x) > -bound.
            let x = random_in_cut(field, stage, &neg, true, &mut rng, Mode::Approx);
            let y = x.sub(&av.inv()?)?.inv()?;
            if !a.member(&y)? {
                failures.push(format!("a = {av}, x = {x}"));
            }
        }
    }
    Ok(SampledCheck { name: "shift_inverse".into(), trials, seed, failures })
}

/// Cuts are totally ordered by inclusion, and the order agrees with
/// membership of sampled elements.
pub fn linear_order_check(ring: &ValuationRingRef, trials: usize, seed: u64) -> Result<SampledCheck> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let random_cut = |rng: &mut ChaCha8Rng| -> Result<FractionalIdealCut> {
        let g = if ring.coord_rank() == 2 {
            Gamma::pair(rng.gen_range(-2..=2), rng.gen_range(-3..=3))
        } else {
            Gamma::int(rng.gen_range(-4..=4))
        };
        FractionalIdealCut::new(ring, g, rng.gen_bool(0.5))
    };
    for _ in 0..trials {
        let a = random_cut(&mut rng)?;
        let b = random_cut(&mut rng)?;
        let ord = a.compare(&b)?;
        let (small, big) = if ord == Ordering::Greater { (&b, &a) } else { (&a, &b) };
        let x = small.sample(&mut rng, Mode::Exact);
        if !big.member(&x)? {
            failures.push(format!("{x} in {small} but not in {big}"));
        }
        if ord == Ordering::Equal && a != b {
            failures.push(format!("{a} and {b} compare equal but differ"));
        }
    }
    Ok(SampledCheck { name: "linear_order".into(), trials, seed, failures })
}

/// `radical(A)` against the definition: for integral `A` with bound at most
/// 6 in each coordinate, `x` lies in the radical iff `x^8 in A`.
pub fn radical_check(ring: &ValuationRingRef, trials: usize, seed: u64) -> Result<SampledCheck> {
    use rand::Rng;
    const N: i64 = 8;
    let field = ring.field();
    let stage = ring.stage();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let rank2 = ring.coord_rank() == 2;
    for _ in 0..if ring.is_trivial() { 0 } else { trials } {
        let (bound, v) = if rank2 {
            let b = Gamma::pair(rng.gen_range(0..=2), rng.gen_range(-3..=6));
            (b, Gamma::pair(rng.gen_range(-1..=2), rng.gen_range(-3..=3)))
        } else {
            (Gamma::int(rng.gen_range(0..=6)), Gamma::int(rng.gen_range(-1..=3)))
        };
        let a = FractionalIdealCut::new(ring, bound, rng.gen_bool(0.3))?;
        if !a.is_integral() {
            continue;
        }
        let x = crate::fields::sample::random_with_val(field, stage, &v, &mut rng, Mode::Exact);
        let expected = a.member(&x.pow(N)?)?;
        if a.radical()?.member(&x)? != expected {
            failures.push(format!("x = {x}, A = {a}"));
        }
    }
    Ok(SampledCheck { name: "radical".into(), trials, seed, failures })
}

/// Ideal operations addressed by name.
#[derive(Debug, Clone)]
pub enum IdealOp {
    Sum,
    Product,
    Radical,
    Compare,
    Member(Element),
}

#[derive(Debug, Clone, PartialEq)]
pub enum IdealResult {
    Cut(FractionalIdealCut),
    Order(Ordering),
    Bool(bool),
}

pub fn ideal_algebra(a: &FractionalIdealCut, b: &FractionalIdealCut, op: &IdealOp) -> Result<IdealResult> {
    Ok(match op {
        IdealOp::Sum => IdealResult::Cut(a.sum(b)?),
        IdealOp::Product => IdealResult::Cut(a.product(b)?),
        IdealOp::Radical => IdealResult::Cut(a.radical()?),
        IdealOp::Compare => IdealResult::Order(a.compare(b)?),
        IdealOp::Member(x) => IdealResult::Bool(a.member(x)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{Field, FieldDescriptor};

    fn ring(d: FieldDescriptor, i: usize) -> ValuationRingRef {
        ValuationRingRef::new(&Field::new(d).unwrap(), i).unwrap()
    }

    #[test]
    fn algebra_examples() {
        let o = ring(FieldDescriptor::qadic(5, 16), 1);
        let c = |g: i64, s: bool| FractionalIdealCut::new(&o, Gamma::int(g), s).unwrap();
        assert_eq!(c(2, false).product(&c(3, false)).unwrap(), c(5, false));
        assert_eq!(c(3, false).radical().unwrap(), c(1, false));
        assert_eq!(c(2, false).compare(&c(1, true)).unwrap(), Ordering::Equal);
        assert_eq!(c(2, false).sum(&c(0, false)).unwrap(), c(0, false));
        assert_eq!(c(-1, false).radical(), Err(Error::NotAnIdeal));
        let other = ring(FieldDescriptor::qadic(3, 16), 1);
        let d = FractionalIdealCut::at_least(&other, Gamma::int(1)).unwrap();
        assert_eq!(c(1, false).sum(&d), Err(Error::RingMismatch));
    }

    #[test]
    fn rank_two_radicals() {
        let o = ring(FieldDescriptor::composite(2, 16), 2);
        let a = FractionalIdealCut::at_least(&o, Gamma::pair(0, 3)).unwrap();
        assert_eq!(a.radical().unwrap(), FractionalIdealCut::maximal(&o));
        let b = FractionalIdealCut::at_least(&o, Gamma::pair(2, -5)).unwrap();
        let r = b.radical().unwrap();
        assert_eq!(r.to_string(), "{v >= (1,-inf)}");
        assert!(r.is_subset(&FractionalIdealCut::maximal(&o)).unwrap());
        assert!(a.is_subset(&FractionalIdealCut::maximal(&o)).unwrap());
        assert!(r.is_subset(&a).unwrap());
    }

    #[test]
    fn trivial_ring_has_two_ideals() {
        let o = ring(FieldDescriptor::qadic(2, 16), 0);
        assert!(FractionalIdealCut::maximal(&o).is_zero_ideal());
        assert_eq!(FractionalIdealCut::at_least(&o, Gamma::int(-3)).unwrap(), FractionalIdealCut::whole_ring(&o));
    }

    #[test]
    fn group_checks_on_catalog() {
        let cases = [
            (FieldDescriptor::qadic(2, 32), 1, Gamma::int(3)),
            (FieldDescriptor::laurent(3, 1, 16), 1, Gamma::int(1)),
            (FieldDescriptor::rationals(&[2, 3]), 2, Gamma::int(2)),
            (FieldDescriptor::composite(2, 8), 2, Gamma::pair(0, 3)),
            (FieldDescriptor::composite(2, 8), 1, Gamma::int(1)),
        ];
        for (d, i, g) in cases {
            let o = ring(d, i);
            let a = FractionalIdealCut::at_least(&o, g).unwrap();
            assert!(one_plus_ideal_group_check(&a, 100, 3).unwrap().passed());
            assert!(shift_inverse_check(&a, 100, 4).unwrap().passed());
            assert!(linear_order_check(&o, 100, 5).unwrap().passed());
        }
    }

    #[test]
    fn zero_ideal_group_is_trivial() {
        let o = ring(FieldDescriptor::qadic(2, 16), 1);
        let z = FractionalIdealCut::zero_ideal(&o);
        assert!(z.member(&Element::zero(o.field())).unwrap());
        assert!(!z.member(&Element::from_int(o.field(), 8)).unwrap());
    }
}
