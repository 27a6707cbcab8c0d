//! Membership in the Artin-Schreier group `{y^p - y}` of `F_{p^k}((t))`.

use super::{Certificate, MembershipVerdict, Witness};
use crate::algebra::{Fq, Gamma};
use crate::error::{exhausted, Error, Result};
use crate::fields::series::Series;
use crate::fields::{Element, FieldKind, Value};

/// `s(t)^p`, computed coefficientwise.
fn frobenius(s: &Series<Fq>, p: i64) -> Series<Fq> {
    let zero = s.zero_coef().clone();
    let len = s.coeffs().len();
    let mut coeffs = vec![zero.clone(); (len.max(1) - 1) * p as usize + 1];
    for (i, c) in s.coeffs().iter().enumerate() {
        coeffs[i * p as usize] = c.frobenius();
    }
    if len == 0 {
        coeffs.clear();
    }
    Series::new(zero, s.cap(), s.start() * p, coeffs, s.prec().map(|e| e * p))
}

/// Decides `x in {y^p - y : y in K}` by leading-term reduction.
pub fn artin_schreier_member(x: &Element, p: u64) -> Result<MembershipVerdict> {
    let field = x.field();
    if !matches!(field.kind(), FieldKind::Laurent { .. }) || field.characteristic() != p {
        return Err(Error::InvalidDescriptor(format!("as({p}) is not defined over {field}")));
    }
    let Value::Laurent(s) = x.value() else { unreachable!() };
    if x.is_zero() {
        return Ok(MembershipVerdict::member(Witness::ArtinSchreierRoot { p, root: x.clone() }));
    }
    if x.is_negligible() {
        return Err(exhausted(format!("{x} is zero to the carried precision")));
    }
    let pi = p as i64;
    let cap = s.cap();
    let wp = |y: &Series<Fq>| frobenius(y, pi).sub(y);
    let mut r = s.clone();
    let mut y = Series::zero(s.zero_coef().clone(), cap);
    let mut steps = 0u32;
    // Polar part: kill the leading term c t^v with (c^{1/p} t^{v/p})^p.
    while !r.is_negligible() {
        let v = r.val()?.expect("not negligible");
        if v >= 0 {
            break;
        }
        if v % pi != 0 {
            return Ok(MembershipVerdict::non_member(Certificate::ValuationIndivisible {
                valuation: Gamma::int(v),
                q: p,
            }));
        }
        steps += 1;
        if steps > cap {
            return Err(exhausted(format!("polar reduction exceeded {cap} steps")));
        }
        let y0 = Series::monomial(r.leading().unwrap().pth_root(), v / pi, cap);
        r = r.sub(&wp(&y0)?)?;
        y = y.add(&y0)?;
    }
    if r.is_negligible() && !r.is_exact_zero() && r.prec().map_or(false, |e| e <= 0) {
        return Err(exhausted("constant term is not known"));
    }
    let c0 = r.coeff(0);
    if !c0.is_zero() {
        let Some(s0) = c0.artin_schreier_root() else {
            return Ok(MembershipVerdict::non_member(Certificate::Trace {
                residue: c0.to_string(),
                trace: c0.trace(),
            }));
        };
        r = r.sub(&Series::constant(c0, cap))?;
        y = y.add(&Series::constant(s0, cap))?;
    }
    // Positive part: y = -(r + r^p + r^{p^2} + ...).
    let cutoff = r.prec().unwrap_or(cap as i64);
    let mut term = r.truncate_at(cutoff);
    while !term.is_negligible() {
        y = y.sub(&term)?;
        term = frobenius(&term, pi).truncate_at(cutoff);
    }
    y = y.truncate_at(cutoff);
    let root = Element::new(field, Value::Laurent(y))?;
    Ok(MembershipVerdict::member(Witness::ArtinSchreierRoot { p, root }))
}
