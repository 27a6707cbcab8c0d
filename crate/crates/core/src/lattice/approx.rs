//! Constructive weak approximation for two incomparable localizations of `Q`:
//! `K = A_1 + A_2` and `K^x = (1 + A_1)(1 + A_2)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{FractionalIdealCut, ValuationRingRef};
use crate::algebra::rational::{inv_mod, modulo, pow_int, pow_rat, rat_int, rat_mod, split, vp};
use crate::error::{Error, Result};
use crate::fields::{Element, Field, Stage, Value};

/// `(p, bound)` of a cut on a localization `Z_(p)`.
fn localization_bound(a: &FractionalIdealCut) -> Result<(u64, i64)> {
    let Stage::Localization(p) = a.ring.stage() else {
        return Err(Error::HypothesisViolation(format!("{a} is not a cut of a localization of Q")));
    };
    let m = a.bound.as_int().ok_or_else(|| Error::HypothesisViolation(format!("{a} is the zero ideal")))?;
    Ok((p, m))
}

fn check_pair(a1: &FractionalIdealCut, a2: &FractionalIdealCut) -> Result<(Field, u64, i64, u64, i64)> {
    let field = a1.ring.field().clone();
    if a2.ring.field() != &field {
        return Err(Error::RingMismatch);
    }
    let (p, m) = localization_bound(a1)?;
    let (l, n) = localization_bound(a2)?;
    if p == l {
        return Err(Error::HypothesisViolation("the two localizations coincide".into()));
    }
    Ok((field, p, m, l, n))
}

fn rational(field: &Field, r: BigRational) -> Element {
    Element::new(field, Value::Rational(r)).expect("rationals field")
}

/// Least absolute representative of `a mod m`.
fn centered(a: &BigInt, m: &BigInt) -> BigInt {
    let r = modulo(a, m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Splits `x = y1 + y2` with `y1 in A_1` and `y2 in A_2`.
///
/// With `N1 = max(0, m - v_p(x))`, `N2 = max(0, n - v_l(x))` and
/// `p^N1 a + l^N2 b = 1`, take `y1 = x p^N1 a` and `y2 = x l^N2 b`.
pub fn approx_decompose_add(
    x: &BigRational,
    a1: &FractionalIdealCut,
    a2: &FractionalIdealCut,
) -> Result<(Element, Element)> {
    let (field, p, m, l, n) = check_pair(a1, a2)?;
    if x.is_zero() {
        return Ok((Element::zero(&field), Element::zero(&field)));
    }
    let n1 = (m - vp(x, p).unwrap()).max(0) as u32;
    let n2 = (n - vp(x, l).unwrap()).max(0) as u32;
    let (pp, ll) = (pow_int(p, n1), pow_int(l, n2));
    let a = centered(&inv_mod(&pp, &ll).unwrap_or_default(), &ll);
    let b = (BigInt::from(1) - &pp * &a) / &ll;
    let y1 = x * rat_int(pp * a);
    let y2 = x * rat_int(ll * b);
    Ok((rational(&field, y1), rational(&field, y2)))
}

/// Finds `e1 in A_1`, `e2 in A_2` with `x (1 + e1) = 1 + e2`, so that
/// `x = (1 + e1)^{-1} (1 + e2)`.
///
/// Writing `x = l^s x'`, put `1 + e1 = l^{-s} w` where the integer `w` solves
/// `w = l^s mod p^M` and `w = x'^{-1} mod l^N` with the least nonnegative CRT
/// parameter.
pub fn approx_decompose_mult(
    x: &BigRational,
    a1: &FractionalIdealCut,
    a2: &FractionalIdealCut,
) -> Result<(Element, Element)> {
    let (field, p, m, l, n) = check_pair(a1, a2)?;
    let (s, xu) = split(x, l).ok_or(Error::ZeroInput)?;
    let pm = pow_int(p, m.max(0) as u32);
    let ln = pow_int(l, n.max(0) as u32);
    let r1 = rat_mod(&pow_rat(l, s), &pm).expect("l is a p-adic unit");
    let r2 = rat_mod(&xu.recip(), &ln).expect("unit part");
    // w = r1 + pm k = r2 (mod ln)
    let pm_inv = inv_mod(&pm, &ln).unwrap_or_default();
    let k = modulo(&((&r2 - &r1) * pm_inv), &ln);
    let mut w = r1 + &pm * k;
    if w.is_zero() {
        w = &pm * &ln;
    }
    let one_e1 = pow_rat(l, -s) * rat_int(w);
    let e1 = &one_e1 - BigRational::from_integer(1.into());
    let e2 = x * &one_e1 - BigRational::from_integer(1.into());
    Ok((rational(&field, e1), rational(&field, e2)))
}

/// Builds the cuts `{v_p >= m}` and `{v_l >= n}` on `Q` with primes `p, l`.
pub fn localization_cuts(field: &Field, p: u64, m: i64, l: u64, n: i64) -> Result<(FractionalIdealCut, FractionalIdealCut)> {
    let ring = |q: u64| -> Result<ValuationRingRef> {
        ValuationRingRef::chain(field)
            .into_iter()
            .find(|o| o.stage() == Stage::Localization(q))
            .ok_or_else(|| Error::InvalidDescriptor(format!("{field} has no localization at {q}")))
    };
    Ok((
        FractionalIdealCut::at_least(&ring(p)?, crate::algebra::Gamma::int(m))?,
        FractionalIdealCut::at_least(&ring(l)?, crate::algebra::Gamma::int(n))?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::fields::FieldDescriptor;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q23() -> Field {
        Field::new(FieldDescriptor::rationals(&[2, 3])).unwrap()
    }

    fn r(e: &Element) -> BigRational {
        e.as_rational().unwrap().clone()
    }

    #[test]
    fn fixtures() {
        let k = q23();
        let (a1, a2) = localization_cuts(&k, 2, 3, 3, 2).unwrap();
        let (y1, y2) = approx_decompose_add(&rat(1, 1), &a1, &a2).unwrap();
        assert_eq!((r(&y1), r(&y2)), (rat(-8, 1), rat(9, 1)));
        let (y1, y2) = approx_decompose_add(&rat(0, 1), &a1, &a2).unwrap();
        assert!(y1.is_zero() && y2.is_zero());
        let (e1, e2) = approx_decompose_mult(&rat(5, 1), &a1, &a2).unwrap();
        assert_eq!((r(&e1), r(&e2)), (rat(64, 1), rat(324, 1)));
        let (e1, e2) = approx_decompose_mult(&rat(1, 1), &a1, &a2).unwrap();
        assert_eq!((r(&e1), r(&e2)), (rat(0, 1), rat(0, 1)));

        let k25 = Field::new(FieldDescriptor::rationals(&[2, 5])).unwrap();
        let (b1, b2) = localization_cuts(&k25, 2, 1, 5, 1).unwrap();
        let (y1, y2) = approx_decompose_add(&rat(1, 7), &b1, &b2).unwrap();
        assert_eq!(r(&y1) + r(&y2), rat(1, 7));
        assert!(vp(&r(&y1), 2).unwrap() >= 1 && vp(&r(&y2), 5).unwrap() >= 1);
    }

    #[test]
    fn random_reconstruction() {
        let k = q23();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let one = rat(1, 1);
        for _ in 0..1000 {
            let x = rat(rng.gen_range(-500..=500), rng.gen_range(1..=500))
                * pow_rat(2, rng.gen_range(-4..=4))
                * pow_rat(3, rng.gen_range(-4..=4));
            let (m, n) = (rng.gen_range(-3..=6), rng.gen_range(-3..=6));
            let (a1, a2) = localization_cuts(&k, 2, m, 3, n).unwrap();
            let (y1, y2) = approx_decompose_add(&x, &a1, &a2).unwrap();
            assert_eq!(r(&y1) + r(&y2), x);
            assert!(a1.member(&y1).unwrap() && a2.member(&y2).unwrap());
            if x.is_zero() {
                continue;
            }
            let (e1, e2) = approx_decompose_mult(&x, &a1, &a2).unwrap();
            let (e1, e2) = (r(&e1), r(&e2));
            assert_eq!((&one + &e2) / (&one + &e1), x, "m={m} n={n}");
            assert!(a1.member(&rational(&k, e1)).unwrap() && a2.member(&rational(&k, e2)).unwrap());
        }
    }
}
