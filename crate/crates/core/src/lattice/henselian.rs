//! `q`-henselianity of chain rings, decided by the unit and Artin-Schreier
//! criteria.

use serde::Serialize;

use super::compat::{compatible, first_non_member, one_plus_multiples, sampled_membership, Answer};
use super::ideal::SampledCheck;
use super::{FractionalIdealCut, ValuationRingRef};
use crate::algebra::finite_field::is_prime;
use crate::algebra::Gamma;
use crate::error::{Error, Result};
use crate::fields::Stage;
use crate::subgroups::{has_root_of_unity, Certificate, SubgroupDescriptor};

/// Which criterion applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HenselCriterion {
    /// The trivial valuation is henselian.
    Trivial,
    /// `char(k) != q`: `1 + M ⊆ (K^x)^q`.
    UnitGroup,
    /// `char(K) = q`: `M ⊆ K^(q)`.
    ArtinSchreier,
    /// `char(K) = 0`, `char(k) = q`, rank one: `1 + q^2 M ⊆ (K^x)^q`.
    MixedCharacteristic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HenselReport {
    pub ring: String,
    pub chain_index: usize,
    pub q: u64,
    pub criterion: HenselCriterion,
    pub answer: Answer,
    pub rule: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<SampledCheck>,
}

/// Decides whether `o` is `q`-henselian.
///
/// Requires `zeta_q ∈ K` when `q != char K`, and rank one in mixed
/// characteristic; violations are reported as [`Error::HypothesisViolation`].
pub fn q_henselian(o: &ValuationRingRef, q: u64, trials: usize, seed: u64) -> Result<HenselReport> {
    if !is_prime(q) {
        return Err(Error::InvalidDescriptor(format!("q = {q} is not prime")));
    }
    let field = o.field();
    let char_k = field.characteristic();
    if q != char_k && !has_root_of_unity(field, q) {
        return Err(Error::HypothesisViolation(format!("{field} has no primitive root of unity of order {q}")));
    }
    let report = |criterion, answer, rule: &str| HenselReport {
        ring: o.name(),
        chain_index: o.chain_index(),
        q,
        criterion,
        answer,
        rule: rule.into(),
        witness: None,
        certificate: None,
        check: None,
    };
    if o.is_trivial() {
        return Ok(report(HenselCriterion::Trivial, Answer::Yes, "the trivial valuation is henselian"));
    }
    let from_evidence = |criterion, g: SubgroupDescriptor| -> Result<HenselReport> {
        let ev = compatible(o, &g, trials, seed)?;
        Ok(HenselReport {
            witness: ev.witness,
            certificate: ev.certificate,
            check: ev.check,
            ..report(criterion, ev.answer, &ev.rule)
        })
    };
    if o.residue_characteristic() != q {
        return from_evidence(HenselCriterion::UnitGroup, SubgroupDescriptor::PowerGroup { q });
    }
    if char_k == q {
        return from_evidence(HenselCriterion::ArtinSchreier, SubgroupDescriptor::ArtinSchreier { p: q });
    }
    if o.rank() != 1 {
        return Err(Error::HypothesisViolation(format!(
            "mixed characteristic criterion needs rank one, {} has rank {}",
            o.name(),
            o.rank()
        )));
    }
    // v(q) = 1 at every rank-one mixed characteristic stage here.
    let g = SubgroupDescriptor::PowerGroup { q };
    let mut r = report(HenselCriterion::MixedCharacteristic, Answer::Unknown, "");
    match o.stage() {
        Stage::Localization(p) => match first_non_member(one_plus_multiples(field, p, 3), &g)? {
            Some((x, c)) => {
                r.answer = Answer::No;
                r.rule = format!("1 + {p}^3 k is not a {q}-th power in Q");
                r.witness = Some(x.to_string());
                r.certificate = c;
            }
            None => r.rule = "no element of 1 + q^2 M outside (K^x)^q found".into(),
        },
        _ => {
            let a = FractionalIdealCut::at_least(o, Gamma::int(3))?;
            let check = sampled_membership("one_plus_q2_maximal_in_powers", &a, &g, trials, seed)?;
            r.answer = if check.passed() { Answer::Yes } else { Answer::No };
            r.rule = "unit criterion: 1 + q^2 M inside (K^x)^q".into();
            r.witness = check.failures.first().cloned();
            r.check = Some(check);
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{Field, FieldDescriptor};

    fn ring(d: FieldDescriptor, i: usize) -> ValuationRingRef {
        ValuationRingRef::new(&Field::new(d).unwrap(), i).unwrap()
    }

    #[test]
    fn table() {
        let z5 = ring(FieldDescriptor::qadic(5, 32), 1);
        let r = q_henselian(&z5, 2, 100, 0).unwrap();
        assert_eq!((r.criterion, r.answer), (HenselCriterion::UnitGroup, Answer::Yes));

        let f3 = ring(FieldDescriptor::laurent(3, 1, 24), 1);
        let r = q_henselian(&f3, 3, 100, 0).unwrap();
        assert_eq!((r.criterion, r.answer), (HenselCriterion::ArtinSchreier, Answer::Yes));

        let z2 = ring(FieldDescriptor::qadic(2, 32), 1);
        let r = q_henselian(&z2, 2, 100, 0).unwrap();
        assert_eq!((r.criterion, r.answer), (HenselCriterion::MixedCharacteristic, Answer::Yes));

        assert!(matches!(q_henselian(&z2, 3, 10, 0), Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn localizations_are_not_henselian() {
        let z2 = ring(FieldDescriptor::rationals(&[2]), 1);
        let r = q_henselian(&z2, 2, 10, 0).unwrap();
        assert_eq!(r.answer, Answer::No);
        let z3 = ring(FieldDescriptor::rationals(&[3]), 1);
        assert_eq!(q_henselian(&z3, 2, 10, 0).unwrap().answer, Answer::No);
        assert!(matches!(q_henselian(&z3, 3, 10, 0), Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn rank_two_mixed_characteristic_is_out_of_range() {
        let comp = ring(FieldDescriptor::composite(2, 10), 2);
        assert!(matches!(q_henselian(&comp, 2, 10, 0), Err(Error::HypothesisViolation(_))));
        let tadic = ring(FieldDescriptor::composite(2, 10), 1);
        assert_eq!(q_henselian(&tadic, 2, 10, 0).unwrap().answer, Answer::Yes);
    }
}
