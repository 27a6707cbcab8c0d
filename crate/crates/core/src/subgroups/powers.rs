//! Membership in the multiplicative group of `q`-th powers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use super::{Certificate, MembershipVerdict, Witness};
use crate::algebra::finite_field::is_prime;
use crate::algebra::rational::exact_root;
use crate::algebra::{FiniteField, Fq, Gamma};
use crate::error::{exhausted, Error, Result};
use crate::fields::padic::{lift_root_tame, lift_root_wild, QNum};
use crate::fields::series::{Coef, Series};
use crate::fields::{Element, Value};

type Outcome<T> = std::result::Result<T, Certificate>;

/// Decides `x in (K^x)^q`, producing a root or a typed obstruction.
pub fn is_qth_power(x: &Element, q: u64) -> Result<MembershipVerdict> {
    if !is_prime(q) {
        return Err(Error::InvalidDescriptor(format!("{q} is not prime")));
    }
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    if x.is_negligible() {
        return Err(exhausted(format!("{x} is zero to the carried precision")));
    }
    let field = x.field();
    let root: Outcome<Value> = match x.value() {
        Value::Rational(r) => rational_root(r, q).map(Value::Rational),
        Value::QAdic(a) => qnum_root(a, q)?.map(Value::QAdic),
        Value::Laurent(s) => {
            if q == field.characteristic() {
                inseparable_root(s, q)?.map(Value::Laurent)
            } else {
                laurent_root(s, q)?.map(Value::Laurent)
            }
        }
        Value::Composite(s) => composite_root(s, q)?.map(Value::Composite),
    };
    Ok(match root {
        Ok(v) => {
            let root = Element::new(field, v)?;
            debug_assert!(root.pow(q as i64)?.eq_prec(x), "root check failed for {x}");
            MembershipVerdict::member(Witness::Root { q, root })
        }
        Err(c) => MembershipVerdict::non_member(c),
    })
}

fn rational_root(r: &BigRational, q: u64) -> Outcome<BigRational> {
    if r.is_negative() && q % 2 == 0 {
        return Err(Certificate::Sign);
    }
    if let Some(y) = exact_root(r, q as u32) {
        return Ok(y);
    }
    let d = BigRational::from_integer(r.denom().clone());
    let part = if exact_root(&d, q as u32).is_some() { "numerator" } else { "denominator" };
    Err(Certificate::NotPerfectPower { part: part.into(), q })
}

/// `q`-th root in `Q_p`.
pub fn qnum_root(x: &QNum, q: u64) -> Result<Outcome<QNum>> {
    if let Some(r) = x.as_rational() {
        if let Some(y) = exact_root(r, q as u32) {
            return Ok(Ok(QNum::exact(x.ctx(), y)));
        }
    }
    let ctx = x.ctx().clone();
    let p = ctx.p();
    let v = x.val()?.ok_or(Error::ZeroInput)?;
    if v.rem_euclid(q as i64) != 0 {
        return Ok(Err(Certificate::ValuationIndivisible { valuation: Gamma::int(v), q }));
    }
    let k = x.rel().unwrap_or(ctx.prec()).min(ctx.prec());
    let (_, u) = x.unit_digits(k)?;
    let vq = v / q as i64;
    if q != p {
        let ff = FiniteField::new(p, 1)?;
        let r = (&u % p).to_u64().unwrap();
        return Ok(match ff.from_u64(r).nth_root(q) {
            None => Err(Certificate::ResidueClass { residue: r.to_string(), residue_field: format!("F_{p}"), q }),
            Some(r0) => {
                let y = lift_root_tame(&u, r0.as_prime().unwrap(), q, p, k);
                Ok(QNum::approx(&ctx, vq, y, k))
            }
        });
    }
    if p == 2 {
        if k < 3 {
            return Err(exhausted("need three binary digits to decide squares in Q_2"));
        }
        let class = (&u % 8u32).to_u64().unwrap();
        if class != 1 {
            return Ok(Err(Certificate::Mod8 { residue: class }));
        }
        let y = lift_root_wild(&u, 2, k);
        return Ok(Ok(QNum::approx(&ctx, vq, y, k - 1)));
    }
    if k < 2 {
        return Err(exhausted("need two digits to decide q-th powers in Q_q"));
    }
    let m = ctx.pow(k);
    let omega = u.modpow(&ctx.pow(k - 1), &m);
    let omega_inv = crate::algebra::rational::inv_mod(&omega, &m).expect("unit");
    let u1 = (&u * omega_inv).mod_floor(&m);
    let p2 = BigInt::from(p * p);
    let class = (&u1 % &p2).to_u64().unwrap();
    if class != 1 {
        return Ok(Err(Certificate::PrincipalUnit { class, modulus: p * p }));
    }
    // The Teichmüller factor is its own q-th root.
    let y = (lift_root_wild(&u1, p, k) * omega).mod_floor(&m);
    Ok(Ok(QNum::approx(&ctx, vq, y, k - 1)))
}

/// Root of a series `1 + O(t)` by Newton iteration with doubling precision.
fn unit_series_root<C: Coef>(z: &Series<C>, q: u64) -> Result<Series<C>> {
    let one = z.zero_coef().one_like();
    let target = z.rel().unwrap_or(z.cap() as i64).min(z.cap() as i64).max(1);
    let qc = one.from_int_like(q as i64);
    let mut y = Series::constant(one, z.cap());
    let mut m = 1i64;
    loop {
        m = (2 * m).min(target);
        let zm = z.truncate_at(m);
        let f = y.pow(q as i64)?.sub(&zm)?;
        let df = y.pow(q as i64 - 1)?.scale(&qc)?;
        y = y.sub(&f.div(&df)?)?.truncate_at(m);
        if m == target {
            break;
        }
    }
    Ok(y)
}

/// `x = t^a c (1 + w)`: the valuation, leading coefficient and unit series.
fn split_series<C: Coef>(s: &Series<C>) -> Result<(i64, C, Series<C>)> {
    let a = s.val()?.ok_or(Error::ZeroInput)?;
    let c = s.leading().unwrap().clone();
    let z = s.shift(-a).scale(&c.inv_coef()?)?;
    Ok((a, c, z))
}

fn laurent_root(s: &Series<Fq>, q: u64) -> Result<Outcome<Series<Fq>>> {
    let (a, c, z) = split_series(s)?;
    if a.rem_euclid(q as i64) != 0 {
        return Ok(Err(Certificate::ValuationIndivisible { valuation: Gamma::int(a), q }));
    }
    let Some(r0) = c.nth_root(q) else {
        let f = c.field();
        return Ok(Err(Certificate::ResidueClass {
            residue: c.to_string(),
            residue_field: format!("F_{}^{}", f.characteristic(), f.degree()),
            q,
        }));
    };
    let w = unit_series_root(&z, q)?;
    Ok(Ok(w.scale(&r0)?.shift(a / q as i64)))
}

/// `q = char K`: `x` is a `q`-th power iff only exponents divisible by `q`
/// occur; the root applies the inverse Frobenius coefficientwise.
fn inseparable_root(s: &Series<Fq>, q: u64) -> Result<Outcome<Series<Fq>>> {
    let qi = q as i64;
    if let Some((e, _)) = s.terms().find(|(e, _)| e.rem_euclid(qi) != 0) {
        let v = s.val()?.unwrap_or(e);
        if v.rem_euclid(qi) != 0 {
            return Ok(Err(Certificate::ValuationIndivisible { valuation: Gamma::int(v), q }));
        }
        return Ok(Err(Certificate::InseparableTerm { exponent: e }));
    }
    let zero = s.zero_coef().clone();
    let start = s.start().div_euclid(qi);
    let prec = s.prec().map(|p| p.div_euclid(qi) + i64::from(p.rem_euclid(qi) != 0));
    let end = prec.unwrap_or(s.start() / qi + s.coeffs().len() as i64 / qi + 1);
    let coeffs = (start..end).map(|j| s.coeff(j * qi).pth_root()).collect();
    Ok(Ok(Series::new(zero, s.cap(), start, coeffs, prec)))
}

fn composite_root(s: &Series<QNum>, q: u64) -> Result<Outcome<Series<QNum>>> {
    let (a, c, z) = split_series(s)?;
    let b = c.val()?.expect("leading coefficient is nonzero");
    if a.rem_euclid(q as i64) != 0 || b.rem_euclid(q as i64) != 0 {
        return Ok(Err(Certificate::ValuationIndivisible { valuation: Gamma::pair(a, b), q }));
    }
    let r0 = match qnum_root(&c, q)? {
        Ok(r) => r,
        Err(cert) => return Ok(Err(cert)),
    };
    let w = unit_series_root(&z, q)?;
    Ok(Ok(w.scale(&r0)?.shift(a / q as i64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{rat, rationals_up_to_height};
    use crate::fields::literal::parse_element;
    use crate::fields::sample::{random_element, Mode};
    use crate::fields::{Field, FieldDescriptor};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn k(d: FieldDescriptor) -> Field {
        Field::new(d).unwrap()
    }

    fn root_of(v: &MembershipVerdict) -> &Element {
        match v {
            MembershipVerdict::Member { witness: Witness::Root { root, .. } } => root,
            other => panic!("expected a root, got {other:?}"),
        }
    }

    #[test]
    fn qadic_examples() {
        let q5 = k(FieldDescriptor::qadic(5, 32));
        let v = is_qth_power(&Element::from_int(&q5, 4), 2).unwrap();
        assert_eq!(root_of(&v).pow(2).unwrap(), Element::from_int(&q5, 4));
        assert_eq!(
            is_qth_power(&Element::from_int(&q5, 2), 2).unwrap(),
            MembershipVerdict::non_member(Certificate::ResidueClass {
                residue: "2".into(),
                residue_field: "F_5".into(),
                q: 2
            })
        );
        let q2 = k(FieldDescriptor::qadic(2, 32));
        let v = is_qth_power(&Element::from_int(&q2, 17), 2).unwrap();
        assert_eq!(root_of(&v).pow(2).unwrap(), Element::from_int(&q2, 17));
        assert_eq!(
            is_qth_power(&Element::from_int(&q2, 3), 2).unwrap(),
            MembershipVerdict::non_member(Certificate::Mod8 { residue: 3 })
        );
        assert_eq!(
            is_qth_power(&Element::from_int(&q2, 8), 2).unwrap(),
            MembershipVerdict::non_member(Certificate::ValuationIndivisible { valuation: Gamma::int(3), q: 2 })
        );
        assert_eq!(is_qth_power(&Element::zero(&q2), 2).unwrap_err(), Error::ZeroInput);
    }

    #[test]
    fn cube_roots_in_q3() {
        let q3 = k(FieldDescriptor::qadic(3, 24));
        // 10 = 1 + 9 is a cube; 4 = 1 + 3 is not.
        let v = is_qth_power(&Element::from_int(&q3, 10), 3).unwrap();
        assert_eq!(root_of(&v).pow(3).unwrap(), Element::from_int(&q3, 10));
        assert!(is_qth_power(&Element::from_int(&q3, 4), 3).unwrap().is_non_member());
        // -1 * 28 has Teichmüller part -1.
        let v = is_qth_power(&Element::from_int(&q3, -28), 3).unwrap();
        assert_eq!(root_of(&v).pow(3).unwrap(), Element::from_int(&q3, -28));
    }

    #[test]
    fn laurent_examples() {
        let l = k(FieldDescriptor::laurent(3, 1, 20));
        let x = parse_element(&l, "t^-2 + 2*t").unwrap();
        let v = is_qth_power(&x, 2).unwrap();
        assert_eq!(root_of(&v).pow(2).unwrap(), x);
        let y = parse_element(&l, "t^3 + t^6").unwrap();
        let v = is_qth_power(&y, 3).unwrap();
        assert_eq!(root_of(&v).pow(3).unwrap(), y);
        let z = parse_element(&l, "t^3 + t^4").unwrap();
        assert_eq!(
            is_qth_power(&z, 3).unwrap(),
            MembershipVerdict::non_member(Certificate::InseparableTerm { exponent: 4 })
        );
        let f9 = k(FieldDescriptor::laurent(3, 2, 20));
        let u = parse_element(&f9, "laurent(3,2; u)").unwrap();
        // u^2 = -1 in F_9 and u generates a group of order 4, so u is not a square... unless
        // it is; decide by enumeration.
        let expected = f9.finite_field().unwrap().generator().is_qth_power(2);
        assert_eq!(is_qth_power(&u, 2).unwrap().is_member(), expected);
    }

    #[test]
    fn composite_examples() {
        let c = k(FieldDescriptor::composite(2, 12));
        let x = parse_element(&c, "comp(2; (1+t)*2^2)").unwrap();
        let v = is_qth_power(&x, 2).unwrap();
        assert_eq!(root_of(&v).pow(2).unwrap(), x);
        let y = parse_element(&c, "comp(2; 3 + t)").unwrap();
        assert!(is_qth_power(&y, 2).unwrap().is_non_member());
        let z = parse_element(&c, "comp(2; 2*t^2)").unwrap();
        assert!(is_qth_power(&z, 2).unwrap().is_non_member());
    }

    /// Brute force over `Q`: `x` is a `q`-th power iff some `y` of height at
    /// most `50^(1/q)` has `y^q = x`.
    #[test]
    fn rationals_match_enumeration() {
        let field = k(FieldDescriptor::rationals(&[2]));
        for q in [2u64, 3] {
            let bound = if q == 2 { 8 } else { 4 };
            let powers: std::collections::HashSet<BigRational> = rationals_up_to_height(bound)
                .into_iter()
                .map(|y| num_traits::pow::Pow::pow(&y, q as u32))
                .collect();
            for x in rationals_up_to_height(50).into_iter().filter(|r| !num_traits::Zero::is_zero(r)) {
                let e = Element::new(&field, Value::Rational(x.clone())).unwrap();
                let v = is_qth_power(&e, q).unwrap();
                assert_eq!(v.is_member(), powers.contains(&x), "{x}, q = {q}");
            }
        }
        let e = Element::new(&field, Value::Rational(rat(-8, 27))).unwrap();
        assert!(is_qth_power(&e, 3).unwrap().is_member());
    }

    #[test]
    fn random_witnesses_verify() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let fields = [
            FieldDescriptor::qadic(2, 32),
            FieldDescriptor::qadic(3, 32),
            FieldDescriptor::qadic(5, 32),
            FieldDescriptor::laurent(3, 1, 16),
            FieldDescriptor::laurent(2, 2, 16),
            FieldDescriptor::composite(3, 8),
        ];
        for d in fields {
            let f = k(d);
            for q in [2u64, 3] {
                for _ in 0..40 {
                    for mode in [Mode::Exact, Mode::Approx] {
                        let y = random_element(&f, &mut rng, -3..=3, mode);
                        let x = y.pow(q as i64).unwrap();
                        let v = is_qth_power(&x, q).unwrap();
                        assert_eq!(root_of(&v).pow(q as i64).unwrap(), x, "{x} in {f}");
                        let w = random_element(&f, &mut rng, -3..=3, mode);
                        if let MembershipVerdict::Member { witness: Witness::Root { root, .. } } =
                            is_qth_power(&w, q).unwrap()
                        {
                            assert_eq!(root.pow(q as i64).unwrap(), w);
                        }
                    }
                }
            }
        }
    }
}
