//! Newton lifting of simple roots.

use crate::algebra::{Gamma, Polynomial};
use crate::error::{exhausted, Error, Result};
use crate::fields::{Bound, Element, FieldKind};

fn lower(b: Bound<Gamma>) -> Gamma {
    match b {
        Bound::Infinite => Gamma::Infinity,
        Bound::Exact(g) | Bound::AtLeast(g) => g,
    }
}

/// Lifts `a0` to a root `r` of `f` with `val(f(r)) >= target`.
///
/// Requires the Newton condition `val(f(a0)) > 2 val(f'(a0))` for the natural
/// valuation of the field.
pub fn hensel_lift(f: &Polynomial<Element>, a0: &Element, target: &Gamma) -> Result<Element> {
    let field = a0.field();
    if matches!(field.kind(), FieldKind::RationalsAt { .. }) {
        return Err(Error::Unsupported("Newton lifting needs a complete field".into()));
    }
    let stage = field.natural_stage();
    let df = f.derivative()?;
    let mut r = a0.approximate();
    let fr = f.eval(&r)?;
    let bf = fr.bound_at(stage)?;
    if lower(bf).ge(target) {
        return Ok(r);
    }
    let Bound::Exact(vf) = bf else {
        return Err(exhausted("residual at the starting point is unresolved"));
    };
    let dr = df.eval(&r)?;
    let vd = match dr.bound_at(stage)? {
        Bound::Exact(v) => v,
        _ => return Err(Error::NoSimpleRoot(format!("f'({a0}) vanishes"))),
    };
    if !vf.gt(&vd.scale(2)) {
        return Err(Error::NoSimpleRoot(format!(
            "val f(a0) = {vf} is not above 2 val f'(a0) = {}",
            vd.scale(2)
        )));
    }
    let iterations = 2 * (32 - field.precision().leading_zeros()) + 8;
    for _ in 0..iterations {
        let fr = f.eval(&r)?;
        if lower(fr.bound_at(stage)?).ge(target) {
            return Ok(r);
        }
        if fr.is_negligible() {
            return Err(exhausted("precision ran out before reaching the target"));
        }
        let dr = df.eval(&r)?;
        r = r.sub(&fr.div(&dr)?)?;
    }
    let fr = f.eval(&r)?;
    if lower(fr.bound_at(stage)?).ge(target) {
        Ok(r)
    } else {
        Err(exhausted("Newton iteration did not reach the target"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{Field, FieldDescriptor};

    fn q(p: u64) -> Field {
        Field::new(FieldDescriptor::qadic(p, 40)).unwrap()
    }

    fn poly(k: &Field, c: &[i64]) -> Polynomial<Element> {
        Polynomial::new(c.iter().map(|&x| Element::from_int(k, x)).collect())
    }

    #[test]
    fn golden_ratio_like_root_in_q5() {
        let k = q(5);
        let f = poly(&k, &[-5, -1, 1]);
        let r = hensel_lift(&f, &Element::one(&k), &Gamma::int(40)).unwrap();
        assert_eq!(r.residue().unwrap().to_string(), "1");
        assert!(f.eval(&r).unwrap().val_at_least(k.natural_stage(), &Gamma::int(40), false) == Some(true));
    }

    #[test]
    fn two_is_not_a_square_mod_5() {
        let k = q(5);
        let f = poly(&k, &[-2, 0, 1]);
        for a in 1..5 {
            let err = hensel_lift(&f, &Element::from_int(&k, a), &Gamma::int(40)).unwrap_err();
            assert!(matches!(err, Error::NoSimpleRoot(_)));
        }
    }

    #[test]
    fn linear_root() {
        let k = q(3);
        let f = poly(&k, &[-3, 1]);
        let r = hensel_lift(&f, &Element::zero(&k), &Gamma::int(40)).unwrap();
        assert_eq!(r, Element::from_int(&k, 3));
    }

    #[test]
    fn laurent_square_root_of_one_plus_t() {
        let k = Field::new(FieldDescriptor::laurent(5, 1, 24)).unwrap();
        let t = Element::t(&k).unwrap();
        let x = Element::one(&k).add(&t).unwrap();
        let f = Polynomial::new(vec![x.neg(), Element::zero(&k), Element::one(&k)]);
        let r = hensel_lift(&f, &Element::one(&k), &Gamma::int(24)).unwrap();
        assert!(r.mul(&r).unwrap().eq_prec(&x));
    }
}
