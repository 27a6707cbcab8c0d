//! Seeded random elements with prescribed valuations.

use std::ops::RangeInclusive;

use num_rational::BigRational;
use rand::Rng;

use super::padic::{random_unit_rational, QNum};
use super::series::Series;
use super::{Element, Field, FieldKind, Stage, Value};
use crate::algebra::rational::pow_rat;
use crate::algebra::Gamma;

/// Whether samples are exact (rationals, Laurent polynomials) or carry the
/// full precision budget of random digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Approx,
}

const HEIGHT: i64 = 1000;
const EXACT_TERMS: usize = 5;

fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> BigRational {
    loop {
        let a: i64 = rng.gen_range(-HEIGHT..=HEIGHT);
        if a != 0 {
            return BigRational::new(a.into(), rng.gen_range(1..=HEIGHT).into());
        }
    }
}

fn qnum_with_val<R: Rng + ?Sized>(field: &Field, v: i64, rng: &mut R, mode: Mode) -> QNum {
    let ctx = field.padic_ctx().expect("q-adic context");
    match mode {
        Mode::Approx => QNum::random(ctx, rng, v..=v),
        Mode::Exact => QNum::random_exact(ctx, rng, v..=v, HEIGHT),
    }
}

fn qnum_any<R: Rng + ?Sized>(field: &Field, rng: &mut R, mode: Mode) -> QNum {
    if rng.gen_ratio(1, 4) {
        return QNum::zero(field.padic_ctx().unwrap());
    }
    let v = rng.gen_range(-3..=3);
    qnum_with_val(field, v, rng, mode)
}

fn laurent_with_val<R: Rng + ?Sized>(field: &Field, v: i64, rng: &mut R, mode: Mode) -> Element {
    let ff = field.finite_field().unwrap();
    let n = field.precision();
    let len = match mode {
        Mode::Approx => n as usize,
        Mode::Exact => rng.gen_range(1..=EXACT_TERMS),
    };
    let mut coeffs = vec![ff.random_nonzero(rng)];
    coeffs.extend((1..len).map(|_| ff.random(rng)));
    let prec = (mode == Mode::Approx).then_some(v + n as i64);
    Element::raw(field, Value::Laurent(Series::new(ff.zero(), n, v, coeffs, prec)))
}

/// Composite series `t^a (c_0 + c_1 t + ...)` with `val_q(c_0) = b`.
fn composite_with<R: Rng + ?Sized>(field: &Field, a: i64, b: i64, rng: &mut R, mode: Mode) -> Element {
    let n = field.precision();
    let len = match mode {
        Mode::Approx => n as usize,
        Mode::Exact => rng.gen_range(1..=EXACT_TERMS),
    };
    let mut coeffs = vec![qnum_with_val(field, b, rng, mode)];
    coeffs.extend((1..len).map(|_| qnum_any(field, rng, mode)));
    let prec = (mode == Mode::Approx).then_some(a + n as i64);
    let zero = QNum::zero(field.padic_ctx().unwrap());
    Element::raw(field, Value::Composite(Series::new(zero, n, a, coeffs, prec)))
}

/// A random element with valuation exactly `v` at `stage`.
pub fn random_with_val<R: Rng + ?Sized>(
    field: &Field,
    stage: Stage,
    v: &Gamma,
    rng: &mut R,
    mode: Mode,
) -> Element {
    let int = || v.as_int().expect("rank-one valuation");
    match (stage, field.kind()) {
        (Stage::Trivial, _) => random_element(field, rng, -3..=3, mode),
        (Stage::Localization(p), _) => {
            let u = random_unit_rational(p, rng, HEIGHT);
            Element::raw(field, Value::Rational(u * pow_rat(p, int())))
        }
        (Stage::PAdicIntegers, _) => Element::raw(field, Value::QAdic(qnum_with_val(field, int(), rng, mode))),
        (Stage::PowerSeries, _) => laurent_with_val(field, int(), rng, mode),
        (Stage::TAdic, _) => {
            let b = rng.gen_range(-3..=3);
            composite_with(field, int(), b, rng, mode)
        }
        (Stage::Composite, _) => {
            let (a, b) = v.as_pair().expect("rank-two valuation");
            composite_with(field, a, b, rng, mode)
        }
    }
}

pub fn random_unit_at<R: Rng + ?Sized>(field: &Field, stage: Stage, rng: &mut R, mode: Mode) -> Element {
    random_with_val(field, stage, &Gamma::zero(stage.rank()), rng, mode)
}

/// A random nonzero element whose natural valuation has coordinates in `vals`.
pub fn random_element<R: Rng + ?Sized>(
    field: &Field,
    rng: &mut R,
    vals: RangeInclusive<i64>,
    mode: Mode,
) -> Element {
    let stage = field.natural_stage();
    match (stage, field.kind()) {
        (Stage::Trivial, FieldKind::RationalsAt { .. }) => {
            Element::raw(field, Value::Rational(random_rational(rng)))
        }
        (Stage::Composite, _) => {
            let a = rng.gen_range(vals.clone());
            let b = rng.gen_range(vals);
            composite_with(field, a, b, rng, mode)
        }
        _ => {
            let v = Gamma::int(rng.gen_range(vals));
            random_with_val(field, stage, &v, rng, mode)
        }
    }
}

/// A random element of the cut `{x : val_stage(x) >= bound}` (or `>`).
///
/// The trivial ring's only proper ideal is `{0}`, which is what a positive
/// bound yields there.
pub fn random_in_cut<R: Rng + ?Sized>(
    field: &Field,
    stage: Stage,
    bound: &Gamma,
    strict: bool,
    rng: &mut R,
    mode: Mode,
) -> Element {
    let b = if strict { bound.succ() } else { *bound };
    match stage {
        Stage::Trivial => {
            if b.is_positive() {
                Element::zero(field)
            } else {
                random_element(field, rng, -3..=3, mode)
            }
        }
        Stage::Composite => {
            let (a, c) = b.as_pair().expect("rank-two bound");
            if crate::lattice::ideal::is_unbounded(c) {
                // Only the first coordinate is constrained.
                let a = if c > 0 { a + 1 } else { a };
                let lead = rng.gen_range(-3..=3);
                composite_with(field, a + rng.gen_range(0..=4), lead, rng, mode)
            } else if rng.gen_bool(0.5) {
                composite_with(field, a, c + rng.gen_range(0..=4), rng, mode)
            } else {
                let lead = rng.gen_range(-3..=3);
                composite_with(field, a + rng.gen_range(1..=4), lead, rng, mode)
            }
        }
        _ => {
            let v = b.as_int().expect("rank-one bound") + rng.gen_range(0..=4);
            random_with_val(field, stage, &Gamma::int(v), rng, mode)
        }
    }
}
