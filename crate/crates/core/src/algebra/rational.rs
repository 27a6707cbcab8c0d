//! Helpers on arbitrary-precision integers and rationals.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_rational::BigRational as Rational;

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn rat_int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `p`-adic valuation of a nonzero integer.
pub fn vp_int(n: &BigInt, p: u64) -> u64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

/// `p`-adic valuation; `None` for zero.
pub fn vp(r: &BigRational, p: u64) -> Option<i64> {
    if r.is_zero() {
        return None;
    }
    Some(vp_int(r.numer(), p) as i64 - vp_int(r.denom(), p) as i64)
}

/// Splits `r = p^v * u` with `u` a `p`-adic unit.
pub fn split(r: &BigRational, p: u64) -> Option<(i64, BigRational)> {
    let v = vp(r, p)?;
    Some((v, r * pow_rat(p, -v)))
}

pub fn pow_int(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

pub fn pow_rat(p: u64, e: i64) -> BigRational {
    let m = pow_int(p, e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(m)
    } else {
        BigRational::new(BigInt::one(), m)
    }
}

/// Least nonnegative residue.
pub fn modulo(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

pub fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Image of a rational with nonnegative valuation in `Z / m`, `m` coprime to
/// its denominator.
pub fn rat_mod(r: &BigRational, m: &BigInt) -> Option<BigInt> {
    let d = inv_mod(r.denom(), m)?;
    Some((r.numer() * d).mod_floor(m))
}

pub fn to_u64(n: &BigInt) -> Option<u64> {
    n.to_u64()
}

/// Exact `q`-th root of an integer, if any (sign respected for odd `q`).
pub fn exact_root_int(n: &BigInt, q: u32) -> Option<BigInt> {
    if n.is_negative() {
        if q % 2 == 0 {
            return None;
        }
        return exact_root_int(&-n, q).map(|r| -r);
    }
    let r = n.nth_root(q);
    if num_traits::pow(r.clone(), q as usize) == *n {
        Some(r)
    } else {
        None
    }
}

pub fn exact_root(r: &BigRational, q: u32) -> Option<BigRational> {
    // The denominator is positive, so the sign lives in the numerator.
    let n = exact_root_int(r.numer(), q)?;
    let d = exact_root_int(r.denom(), q)?;
    Some(BigRational::new(n, d))
}

/// Height `max(|a|, b)` of `a/b` in lowest terms.
pub fn height(r: &BigRational) -> BigInt {
    r.numer().abs().max(r.denom().clone())
}

/// All rationals of height at most `h`, each listed once.
pub fn rationals_up_to_height(h: i64) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero()];
    for b in 1..=h {
        for a in 1..=h {
            if a.gcd(&b) == 1 {
                out.push(rat(a, b));
                out.push(rat(-a, b));
            }
        }
    }
    out
}

pub fn is_unit_at(r: &BigRational, p: u64) -> bool {
    vp(r, p) == Some(0)
}

pub fn sign(r: &BigRational) -> Sign {
    r.numer().sign()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn valuations() {
        assert_eq!(vp(&rat(50, 1), 5), Some(2));
        assert_eq!(vp(&rat(3, 20), 2), Some(-2));
        assert_eq!(vp(&rat(0, 1), 7), None);
        let (v, u) = split(&rat(50, 3), 5).unwrap();
        assert_eq!((v, u), (2, rat(2, 3)));
    }

    #[test]
    fn roots() {
        assert_eq!(exact_root(&rat(-27, 8), 3), Some(rat(-3, 2)));
        assert_eq!(exact_root(&rat(-4, 9), 2), None);
        assert_eq!(exact_root(&rat(2, 1), 2), None);
    }

    #[test]
    fn height_enumeration_is_duplicate_free() {
        let all = rationals_up_to_height(12);
        let set: std::collections::HashSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), all.len());
        assert!(all.iter().all(|r| height(r) <= int(12)));
    }

    /// Naive fractions: unreduced pairs compared by cross multiplication.
    fn naive_eq(n: &BigInt, d: &BigInt, r: &BigRational) -> bool {
        n * r.denom() == r.numer() * d
    }

    proptest! {
        #[test]
        fn normalization_is_idempotent(n in -10_000i64..10_000, d in 1i64..10_000) {
            let r = rat(n, d);
            let again = BigRational::new(r.numer().clone(), r.denom().clone());
            prop_assert_eq!(&r, &again);
            prop_assert!(r.denom() > &BigInt::zero());
            prop_assert!(r.numer().gcd(r.denom()).is_one() || r.is_zero());
        }

        #[test]
        fn arithmetic_matches_naive_fractions(
            a in -1_000_000i64..1_000_000, b in 1i64..1_000_000,
            c in -1_000_000i64..1_000_000, d in 1i64..1_000_000,
        ) {
            let (x, y) = (rat(a, b), rat(c, d));
            let (a, b, c, d) = (int(a), int(b), int(c), int(d));
            prop_assert!(naive_eq(&(&a * &d + &c * &b), &(&b * &d), &(&x + &y)));
            prop_assert!(naive_eq(&(&a * &d - &c * &b), &(&b * &d), &(&x - &y)));
            prop_assert!(naive_eq(&(&a * &c), &(&b * &d), &(&x * &y)));
            if !c.is_zero() {
                let (num, den) = if c.is_negative() { (-&a * &d, -&b * &c) } else { (&a * &d, &b * &c) };
                prop_assert!(naive_eq(&num, &den, &(&x / &y)));
            }
        }

        #[test]
        fn inverse_mod_prime(a in 1i64..1000, which in 0usize..4) {
            let m = int([7, 9, 25, 1024][which]);
            let a = int(a);
            match inv_mod(&a, &m) {
                Some(i) => prop_assert_eq!((a * i).mod_floor(&m), BigInt::one()),
                None => prop_assert!(!a.gcd(&m).is_one()),
            }
        }
    }
}
