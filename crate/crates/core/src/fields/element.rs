//! Elements of the concrete valued fields.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::padic::QNum;
use super::series::Series;
use super::{Bound, Field, FieldKind, Stage};
use crate::algebra::rational::{pow_rat, rat_mod, split, vp};
use crate::algebra::{Fq, Gamma, RingElement};
use crate::error::{exhausted, Error, Result};

#[derive(Clone)]
pub enum Value {
    Rational(BigRational),
    QAdic(QNum),
    Laurent(Series<Fq>),
    Composite(Series<QNum>),
}

#[derive(Clone)]
pub struct Element {
    field: Field,
    value: Value,
}

/// Image of an element under a residue map.
#[derive(Clone, Debug, PartialEq)]
pub enum Residue {
    Finite(Fq),
    QAdic(QNum),
    /// The trivial ring is its own residue field.
    Same(Element),
}

impl Residue {
    pub fn is_zero(&self) -> bool {
        match self {
            Residue::Finite(x) => x.is_zero(),
            Residue::QAdic(x) => x.is_negligible(),
            Residue::Same(x) => x.is_negligible(),
        }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residue::Finite(x) => write!(f, "{x}"),
            Residue::QAdic(x) => write!(f, "{x}"),
            Residue::Same(x) => write!(f, "{x}"),
        }
    }
}

fn lower_of(b: Bound<i64>) -> Option<i64> {
    match b {
        Bound::Exact(v) | Bound::AtLeast(v) => Some(v),
        Bound::Infinite => None,
    }
}

impl Element {
    pub fn new(field: &Field, value: Value) -> Result<Self> {
        let ok = matches!(
            (field.kind(), &value),
            (FieldKind::RationalsAt { .. }, Value::Rational(_))
                | (FieldKind::QAdic { .. }, Value::QAdic(_))
                | (FieldKind::Laurent { .. }, Value::Laurent(_))
                | (FieldKind::CompositeQAdicLaurent { .. }, Value::Composite(_))
        );
        if !ok {
            return Err(Error::FieldMismatch(format!("value does not belong to {field}")));
        }
        Ok(Self { field: field.clone(), value })
    }

    pub(crate) fn raw(field: &Field, value: Value) -> Self {
        Self { field: field.clone(), value }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> &Value {
        &self.value
    }

    fn cap(&self) -> u32 {
        self.field.precision()
    }

    pub fn from_rational(field: &Field, r: &BigRational) -> Result<Self> {
        let n = field.precision();
        let value = match field.kind() {
            FieldKind::RationalsAt { .. } => Value::Rational(r.clone()),
            FieldKind::QAdic { .. } => Value::QAdic(QNum::exact(field.padic_ctx().unwrap(), r.clone())),
            FieldKind::Laurent { p, .. } => {
                let ff = field.finite_field().unwrap();
                let m = BigInt::from(*p);
                let c = rat_mod(r, &m).ok_or(Error::DivisionByZero)?;
                let c = ff.from_u64(u64::try_from(c).expect("residue fits"));
                Value::Laurent(Series::constant(c, n))
            }
            FieldKind::CompositeQAdicLaurent { .. } => {
                let c = QNum::exact(field.padic_ctx().unwrap(), r.clone());
                Value::Composite(Series::constant(c, n))
            }
        };
        Ok(Self::raw(field, value))
    }

    pub fn from_int(field: &Field, n: i64) -> Self {
        Self::from_rational(field, &BigRational::from_integer(n.into())).expect("integers embed")
    }

    pub fn zero(field: &Field) -> Self {
        Self::from_int(field, 0)
    }

    pub fn one(field: &Field) -> Self {
        Self::from_int(field, 1)
    }

    /// The series variable `t`.
    pub fn t(field: &Field) -> Result<Self> {
        let n = field.precision();
        match field.kind() {
            FieldKind::Laurent { .. } => {
                let one = field.finite_field().unwrap().one();
                Ok(Self::raw(field, Value::Laurent(Series::monomial(one, 1, n))))
            }
            FieldKind::CompositeQAdicLaurent { .. } => {
                let one = QNum::one(field.padic_ctx().unwrap());
                Ok(Self::raw(field, Value::Composite(Series::monomial(one, 1, n))))
            }
            _ => Err(Error::Unsupported(format!("{field} has no series variable")))
        }
    }

    /// The generator `u` of the constant field `F_{p^k}`.
    pub fn generator(field: &Field) -> Result<Self> {
        match field.kind() {
            FieldKind::Laurent { .. } => {
                let u = field.finite_field().unwrap().generator();
                Ok(Self::raw(field, Value::Laurent(Series::constant(u, field.precision()))))
            }
            _ => Err(Error::Unsupported(format!("{field} has no constant generator")))
        }
    }

    /// A constant of a Laurent field.
    pub fn from_fq(field: &Field, c: Fq) -> Result<Self> {
        Self::new(field, Value::Laurent(Series::constant(c, field.precision())))
    }

    /// A constant of `Q_q` or of the composite field.
    pub fn from_qnum(field: &Field, c: QNum) -> Result<Self> {
        match field.kind() {
            FieldKind::QAdic { .. } => Self::new(field, Value::QAdic(c)),
            FieldKind::CompositeQAdicLaurent { .. } => {
                Self::new(field, Value::Composite(Series::constant(c, field.precision())))
            }
            _ => Err(Error::FieldMismatch(format!("{field} has no q-adic constants"))),
        }
    }

    /// `O(t^k)` for series fields, `O(q^k)` for `Q_q`.
    pub fn big_o(field: &Field, k: i64) -> Result<Self> {
        let n = field.precision();
        Ok(Self::raw(
            field,
            match field.kind() {
                FieldKind::QAdic { .. } => Value::QAdic(QNum::vanishing(field.padic_ctx().unwrap(), k)),
                FieldKind::Laurent { .. } => {
                    Value::Laurent(Series::big_o(field.finite_field().unwrap().zero(), n, k))
                }
                FieldKind::CompositeQAdicLaurent { .. } => {
                    Value::Composite(Series::big_o(QNum::zero(field.padic_ctx().unwrap()), n, k))
                }
                FieldKind::RationalsAt { .. } => {
                    return Err(Error::Unsupported("rationals are exact".into()))
                }
            },
        ))
    }

    /// `O(q^k)` as a constant of the composite field.
    pub fn big_o_constant(field: &Field, k: i64) -> Result<Self> {
        match field.kind() {
            FieldKind::CompositeQAdicLaurent { .. } => {
                let c = QNum::vanishing(field.padic_ctx().unwrap(), k);
                Ok(Self::raw(field, Value::Composite(Series::constant(c, field.precision()))))
            }
            _ => Self::big_o(field, k),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.value {
            Value::Rational(r) => Some(r),
            Value::QAdic(x) => x.as_rational(),
            _ => None,
        }
    }

    pub fn as_qnum(&self) -> Option<&QNum> {
        match &self.value {
            Value::QAdic(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_laurent(&self) -> Option<&Series<Fq>> {
        match &self.value {
            Value::Laurent(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_composite(&self) -> Option<&Series<QNum>> {
        match &self.value {
            Value::Composite(s) => Some(s),
            _ => None,
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch(format!("{} vs {}", self.field, other.field)))
        }
    }

    fn wrap(&self, value: Value) -> Self {
        Self::raw(&self.field, value)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.wrap(match (&self.value, &other.value) {
            (Value::Rational(a), Value::Rational(b)) => Value::Rational(a + b),
            (Value::QAdic(a), Value::QAdic(b)) => Value::QAdic(a.add(b)?),
            (Value::Laurent(a), Value::Laurent(b)) => Value::Laurent(a.add(b)?),
            (Value::Composite(a), Value::Composite(b)) => Value::Composite(a.add(b)?),
            _ => unreachable!("checked field equality"),
        }))
    }

    pub fn neg(&self) -> Self {
        self.wrap(match &self.value {
            Value::Rational(a) => Value::Rational(-a),
            Value::QAdic(a) => Value::QAdic(a.neg()),
            Value::Laurent(a) => Value::Laurent(a.neg().expect("negation is exact")),
            Value::Composite(a) => Value::Composite(a.neg().expect("negation is exact")),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.wrap(match (&self.value, &other.value) {
            (Value::Rational(a), Value::Rational(b)) => Value::Rational(a * b),
            (Value::QAdic(a), Value::QAdic(b)) => Value::QAdic(a.mul(b)?),
            (Value::Laurent(a), Value::Laurent(b)) => Value::Laurent(a.mul(b)?),
            (Value::Composite(a), Value::Composite(b)) => Value::Composite(a.mul(b)?),
            _ => unreachable!("checked field equality"),
        }))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.wrap(match &self.value {
            Value::Rational(a) if a.is_zero() => return Err(Error::DivisionByZero),
            Value::Rational(a) => Value::Rational(a.recip()),
            Value::QAdic(a) => Value::QAdic(a.inv()?),
            Value::Laurent(a) => Value::Laurent(a.inv()?),
            Value::Composite(a) => Value::Composite(a.inv()?),
        }))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        Ok(self.wrap(match &self.value {
            Value::Rational(a) => {
                if a.is_zero() && e < 0 {
                    return Err(Error::DivisionByZero);
                }
                Value::Rational(num_traits::pow::Pow::pow(a, e as i32))
            }
            Value::QAdic(a) => Value::QAdic(a.pow(e)?),
            Value::Laurent(a) => Value::Laurent(a.pow(e)?),
            Value::Composite(a) => Value::Composite(a.pow(e)?),
        }))
    }

    pub fn mul_int(&self, n: i64) -> Result<Self> {
        self.mul(&Self::from_int(&self.field, n))
    }

    /// Known to be exactly zero.
    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Rational(a) => a.is_zero(),
            Value::QAdic(a) => a.is_exact_zero(),
            Value::Laurent(a) => a.is_exact_zero(),
            Value::Composite(a) => a.is_exact_zero(),
        }
    }

    /// Zero to the carried precision.
    pub fn is_negligible(&self) -> bool {
        match &self.value {
            Value::Rational(a) => a.is_zero(),
            Value::QAdic(a) => a.is_negligible(),
            Value::Laurent(a) => a.is_negligible(),
            Value::Composite(a) => a.is_negligible(),
        }
    }

    pub fn is_exact(&self) -> bool {
        match &self.value {
            Value::Rational(_) => true,
            Value::QAdic(a) => a.is_exact(),
            Value::Laurent(a) => a.is_exact(),
            Value::Composite(a) => a.is_exact() && a.coeffs().iter().all(|c| c.is_exact()),
        }
    }

    pub fn eq_prec(&self, other: &Self) -> bool {
        self.sub(other).map(|d| d.is_negligible()).unwrap_or(false)
    }

    /// Valuation of the natural (finest) ring of the field.
    pub fn val(&self) -> Result<Gamma> {
        self.val_at(self.field.natural_stage())
    }

    pub fn val_at(&self, stage: Stage) -> Result<Gamma> {
        match self.bound_at(stage)? {
            Bound::Infinite => Ok(Gamma::Infinity),
            Bound::Exact(g) => Ok(g),
            Bound::AtLeast(_) => Err(exhausted(format!("valuation of {self} is unresolved"))),
        }
    }

    /// What the carried digits reveal about the valuation at `stage`.
    pub fn bound_at(&self, stage: Stage) -> Result<Bound<Gamma>> {
        let int = |b: Bound<i64>| match b {
            Bound::Infinite => Bound::Infinite,
            Bound::Exact(v) => Bound::Exact(Gamma::int(v)),
            Bound::AtLeast(v) => Bound::AtLeast(Gamma::int(v)),
        };
        Ok(match (stage, &self.value) {
            (Stage::Trivial, _) => {
                if self.is_zero() {
                    Bound::Infinite
                } else if self.is_negligible() {
                    Bound::AtLeast(Gamma::int(0))
                } else {
                    Bound::Exact(Gamma::int(0))
                }
            }
            (Stage::Localization(p), Value::Rational(r)) => match vp(r, p) {
                None => Bound::Infinite,
                Some(v) => Bound::Exact(Gamma::int(v)),
            },
            (Stage::PAdicIntegers, Value::QAdic(x)) => int(x.bound()),
            (Stage::PowerSeries, Value::Laurent(s)) => int(s.bound()),
            (Stage::TAdic, Value::Composite(s)) => int(s.bound()),
            (Stage::Composite, Value::Composite(s)) => match s.bound() {
                Bound::Infinite => Bound::Infinite,
                Bound::AtLeast(a) if s.coeffs().is_empty() => {
                    Bound::AtLeast(Gamma::pair(a, i64::MIN / 4))
                }
                Bound::AtLeast(a) => {
                    let lb = lower_of(s.leading().unwrap().bound()).unwrap_or(0);
                    Bound::AtLeast(Gamma::pair(a, lb))
                }
                Bound::Exact(a) => {
                    let c = s.leading().unwrap();
                    Bound::Exact(Gamma::pair(a, c.val()?.expect("leading coefficient is nonzero")))
                }
            },
            _ => return Err(Error::FieldMismatch(format!("{stage:?} is not a ring of {}", self.field))),
        })
    }

    /// `val(x) >= g` as far as the digits can certify it; `None` if unresolved.
    pub fn val_at_least(&self, stage: Stage, g: &Gamma, strict: bool) -> Option<bool> {
        match self.bound_at(stage).ok()? {
            Bound::Infinite => Some(true),
            Bound::Exact(v) => Some(if strict { v.gt(g) } else { v.ge(g) }),
            Bound::AtLeast(v) => {
                if (strict && v.gt(g)) || (!strict && v.ge(g)) {
                    Some(true)
                } else {
                    None
                }
            }
        }
    }

    pub fn residue(&self) -> Result<Residue> {
        self.residue_at(self.field.natural_stage())
    }

    pub fn residue_at(&self, stage: Stage) -> Result<Residue> {
        if stage == Stage::Trivial {
            return Ok(Residue::Same(self.clone()));
        }
        let v = self.bound_at(stage)?;
        let nonneg = match v {
            Bound::Infinite => true,
            Bound::Exact(g) => !g.is_negative(),
            Bound::AtLeast(g) => !g.is_negative() || return Err(exhausted("residue of an unresolved element")),
        };
        if !nonneg {
            return Err(Error::NegativeValuation);
        }
        match (stage, &self.value) {
            (Stage::Localization(p), Value::Rational(r)) => {
                let ff = crate::algebra::FiniteField::new(p, 1)?;
                let c = rat_mod(r, &BigInt::from(p)).expect("integral at p");
                Ok(Residue::Finite(ff.from_u64(u64::try_from(c).unwrap())))
            }
            (Stage::PAdicIntegers, Value::QAdic(x)) => {
                Ok(Residue::Finite(self.field.finite_field().unwrap().from_u64(x.residue()?)))
            }
            (Stage::PowerSeries, Value::Laurent(s)) => Ok(Residue::Finite(s.coeff(0))),
            (Stage::TAdic, Value::Composite(s)) => Ok(Residue::QAdic(s.coeff(0))),
            (Stage::Composite, Value::Composite(s)) => {
                let r = s.coeff(0).residue()?;
                Ok(Residue::Finite(self.field.finite_field().unwrap().from_u64(r)))
            }
            _ => Err(Error::FieldMismatch(format!("{stage:?} is not a ring of {}", self.field))),
        }
    }

    /// `pi^n` for the canonical uniformizer of the natural valuation.
    pub fn uniformizer_power(field: &Field, n: &Gamma) -> Result<Self> {
        match (field.kind(), n) {
            (FieldKind::RationalsAt { primes }, _) if !primes.is_empty() => {
                let e = n.as_int().ok_or(Error::RankMismatch(1, 2))?;
                Self::new(field, Value::Rational(pow_rat(primes[0], e)))
            }
            (FieldKind::QAdic { q }, _) => {
                let e = n.as_int().ok_or(Error::RankMismatch(1, 2))?;
                Self::from_rational(field, &pow_rat(*q, e))
            }
            (FieldKind::Laurent { .. }, _) => {
                let e = n.as_int().ok_or(Error::RankMismatch(1, 2))?;
                Self::t(field)?.pow(e)
            }
            (FieldKind::CompositeQAdicLaurent { q }, _) => {
                let (a, b) = n.as_pair().ok_or(Error::RankMismatch(2, 1))?;
                Self::t(field)?.pow(a)?.mul(&Self::from_rational(field, &pow_rat(*q, b))?)
            }
            _ => Err(Error::Unsupported("the trivial valuation has no uniformizer".into())),
        }
    }

    /// `y = pi^n * z` with `z` a unit of the natural valuation ring.
    pub fn uniformizer_decompose(&self) -> Result<(Gamma, Element)> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        let n = self.val()?;
        let pi_n = Self::uniformizer_power(&self.field, &n)?;
        Ok((n, self.div(&pi_n)?))
    }

    pub fn unit_part(&self) -> Result<Element> {
        Ok(self.uniformizer_decompose()?.1)
    }

    /// `(v_p, unit)` of an exact rational element.
    pub fn rational_split(&self, p: u64) -> Option<(i64, BigRational)> {
        split(self.as_rational()?, p)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    /// The same element with exact parts replaced by approximations carrying
    /// the field's precision budget.
    pub fn approximate(&self) -> Self {
        let n = self.cap();
        let cut = |start: i64, prec: Option<i64>, zero: bool| -> Option<i64> {
            match prec {
                None if !zero => Some(start + n as i64),
                _ => None,
            }
        };
        self.wrap(match &self.value {
            Value::Rational(r) => Value::Rational(r.clone()),
            Value::QAdic(x) => Value::QAdic(x.truncate(n)),
            Value::Laurent(s) => match cut(s.start(), s.prec(), s.is_exact_zero()) {
                Some(k) => Value::Laurent(s.truncate_at(k)),
                None => Value::Laurent(s.clone()),
            },
            Value::Composite(s) => {
                let s = s.map_coeffs(|c| Ok(c.truncate(n))).expect("truncation is infallible");
                match cut(s.start(), s.prec(), s.is_exact_zero()) {
                    Some(k) => Value::Composite(s.truncate_at(k)),
                    None => Value::Composite(s),
                }
            }
        })
    }

    fn literal_body(&self) -> String {
        match &self.value {
            Value::Rational(r) => r.to_string(),
            Value::QAdic(x) => x.to_string(),
            Value::Laurent(s) => s.to_string(),
            Value::Composite(s) => s.to_string(),
        }
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.eq_prec(other)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Element {
    /// Re-parsable literal syntax.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self.literal_body();
        match self.field.kind() {
            FieldKind::RationalsAt { .. } => write!(f, "{body}"),
            FieldKind::QAdic { q } => write!(f, "qadic({q}; {body})"),
            FieldKind::Laurent { p, k } => write!(f, "laurent({p},{k}; {body})"),
            FieldKind::CompositeQAdicLaurent { q } => write!(f, "comp({q}; {body})"),
        }
    }
}

impl serde::Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl RingElement for Element {
    fn zero_like(&self) -> Self {
        Self::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        Self::one(&self.field)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
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
        Self::from_int(&self.field, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::fields::FieldDescriptor;

    fn field(d: FieldDescriptor) -> Field {
        Field::new(d).unwrap()
    }

    #[test]
    fn valuation_examples() {
        let q5 = field(FieldDescriptor::rationals(&[5]));
        assert_eq!(Element::from_int(&q5, 50).val().unwrap(), Gamma::int(2));
        assert_eq!(Element::zero(&q5).val().unwrap(), Gamma::Infinity);

        let l = field(FieldDescriptor::laurent(3, 1, 16));
        let t = Element::t(&l).unwrap();
        let x = t.pow(-3).unwrap().add(&t).unwrap();
        assert_eq!(x.val().unwrap(), Gamma::int(-3));

        let c = field(FieldDescriptor::composite(2, 16));
        let y = Element::t(&c).unwrap().mul_int(2).unwrap();
        assert_eq!(y.val().unwrap(), Gamma::pair(1, 1));
    }

    #[test]
    fn residue_examples() {
        let q5 = field(FieldDescriptor::qadic(5, 16));
        let seven = Element::from_int(&q5, 7);
        assert_eq!(seven.residue().unwrap().to_string(), "2");
        let fifth = Element::from_rational(&q5, &rat(1, 5)).unwrap();
        assert_eq!(fifth.residue(), Err(Error::NegativeValuation));

        let l = field(FieldDescriptor::laurent(3, 1, 16));
        let x = Element::t(&l).unwrap().add(&Element::one(&l)).unwrap();
        assert_eq!(x.residue().unwrap().to_string(), "1");
    }

    #[test]
    fn uniformizer_examples() {
        let q5 = field(FieldDescriptor::qadic(5, 16));
        let (n, z) = Element::from_int(&q5, 50).uniformizer_decompose().unwrap();
        assert_eq!(n, Gamma::int(2));
        assert_eq!(z, Element::from_int(&q5, 2));
        assert_eq!(Element::zero(&q5).uniformizer_decompose().unwrap_err(), Error::ZeroInput);

        let l = field(FieldDescriptor::laurent(3, 1, 16));
        let t = Element::t(&l).unwrap();
        let one_t = Element::one(&l).add(&t).unwrap();
        let (n, z) = t.inv().unwrap().mul(&one_t).unwrap().uniformizer_decompose().unwrap();
        assert_eq!(n, Gamma::int(-1));
        assert_eq!(z, one_t);
    }

    #[test]
    fn composite_stages() {
        let c = field(FieldDescriptor::composite(2, 16));
        let t = Element::t(&c).unwrap();
        let x = Element::from_int(&c, 12).add(&t).unwrap();
        assert_eq!(x.val_at(Stage::TAdic).unwrap(), Gamma::int(0));
        assert_eq!(x.val_at(Stage::Composite).unwrap(), Gamma::pair(0, 2));
        assert_eq!(x.residue_at(Stage::TAdic).unwrap().to_string(), "12");
        assert_eq!(x.residue_at(Stage::Composite).unwrap().to_string(), "0");
    }
}
