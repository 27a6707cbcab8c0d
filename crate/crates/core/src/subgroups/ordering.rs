//! Refuting that a multiplicative residue subgroup (with 0) is an ordering.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{subgroup_member, SubgroupDescriptor};
use crate::algebra::rational::rat;
use crate::fields::Element;
use crate::lattice::ValuationRingRef;

/// Why `P u {0}` fails to be a positive cone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrderingRefutation {
    /// Fields of positive characteristic admit no ordering.
    PositiveCharacteristic { p: u64 },
    /// Neither `x` nor `-x` lies in `P`.
    NotTotal { element: String },
    /// `a, b in P` but `a + b` is not.
    NotAdditivelyClosed { a: String, b: String },
}

/// Orderings can be refuted by finite evidence but never confirmed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "answer", rename_all = "snake_case")]
pub enum OrderingVerdict {
    No { refutation: OrderingRefutation },
    Unknown { trials: usize },
}

/// Is the image of `g` in the residue field of `ring`, together with 0, an
/// ordering? Residues are represented by rational lifts, which are units of
/// every ring whose residue field has characteristic zero.
pub fn is_ordering(g: &SubgroupDescriptor, ring: &ValuationRingRef, trials: usize, seed: u64) -> OrderingVerdict {
    let p = ring.residue_characteristic();
    if p != 0 {
        return OrderingVerdict::No { refutation: OrderingRefutation::PositiveCharacteristic { p } };
    }
    let field = ring.field();
    let member = |x: &Element| subgroup_member(x, g).ok().and_then(|v| v.as_bool());
    let lift = |n: i64, d: i64| Element::from_rational(field, &rat(n, d)).expect("rationals embed");
    for n in 2..=(trials.max(2) as i64).min(64) {
        let x = lift(n, 1);
        if member(&x) == Some(false) && member(&x.neg()) == Some(false) {
            return OrderingVerdict::No { refutation: OrderingRefutation::NotTotal { element: x.to_string() } };
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random = |rng: &mut ChaCha8Rng| loop {
        let n = rng.gen_range(-30i64..=30);
        if n != 0 {
            break lift(n, rng.gen_range(1..=30));
        }
    };
    for _ in 0..trials {
        let (a, b) = (random(&mut rng), random(&mut rng));
        if member(&a) != Some(true) || member(&b) != Some(true) {
            continue;
        }
        let s = a.add(&b).expect("same field");
        if !s.is_zero() && member(&s) == Some(false) {
            return OrderingVerdict::No {
                refutation: OrderingRefutation::NotAdditivelyClosed { a: a.to_string(), b: b.to_string() },
            };
        }
        if s.is_zero() {
            // a and -a both in P.
            return OrderingVerdict::No {
                refutation: OrderingRefutation::NotAdditivelyClosed { a: a.to_string(), b: b.to_string() },
            };
        }
    }
    OrderingVerdict::Unknown { trials }
}
