//! When `O_G` is definable from `G`, read off a six-cell table indexed by the
//! case and the flavor of `G`, plus the concrete formula for `Z_q` in `Q_q`.

use serde::Serialize;

use super::classify::CaseReport;
use super::compat::{ideal_subset, Answer};
use super::FractionalIdealCut;
use crate::algebra::Gamma;
use crate::error::{exhausted, Error, Result};
use crate::fields::{Element, FieldKind};
use crate::subgroups::ordering::{is_ordering, OrderingVerdict};
use crate::subgroups::powers::is_qth_power;
use crate::subgroups::{Case, MembershipVerdict, SubgroupDescriptor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Definable {
    Yes,
    No,
    OutOfScope,
}

/// The table cell that decided the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DefinabilityRule {
    GroupAdditive,
    GroupMultiplicative,
    WeakAdditive,
    WeakMultiplicative,
    ResidueAdditive,
    ResidueMultiplicative,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SideConditions {
    pub discrete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ordering: Option<OrderingVerdict>,
    /// `x^{-1} O_G ⊆ G` for all `x ∈ M_G`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inverse_ideal: Option<Answer>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefinabilityVerdict {
    pub definable: Definable,
    pub rule: DefinabilityRule,
    pub explanation: String,
    pub side_conditions: SideConditions,
}

/// Applies the table to a classification of `g`.
pub fn definability_verdict(
    report: &CaseReport,
    g: &SubgroupDescriptor,
    trials: usize,
    seed: u64,
) -> Result<DefinabilityVerdict> {
    let og = &report.og;
    let discrete = og.is_discrete();
    let mult = g.is_multiplicative();
    let mut side = SideConditions { discrete, ordering: None, inverse_ideal: None };
    let yes_no = |b: bool| if b { Definable::Yes } else { Definable::No };
    let (definable, rule, explanation) = match (report.case, mult) {
        (Case::GroupCase, true) => (Definable::Yes, DefinabilityRule::GroupMultiplicative, "always".to_string()),
        (Case::GroupCase, false) => {
            let inv = inverse_ideal_condition(report, g)?;
            side.inverse_ideal = Some(inv);
            let d = match (discrete, inv) {
                (true, _) | (_, Answer::Yes) => Definable::Yes,
                (false, Answer::No) => Definable::No,
                (false, Answer::Unknown) => Definable::OutOfScope,
            };
            (d, DefinabilityRule::GroupAdditive, "iff O_G is discrete or x^-1 O_G inside G for all x in M_G".into())
        }
        (Case::WeakCase, m) => (
            yes_no(discrete),
            if m { DefinabilityRule::WeakMultiplicative } else { DefinabilityRule::WeakAdditive },
            "iff O_G is discrete".into(),
        ),
        (Case::ResidueCase, false) => (Definable::Yes, DefinabilityRule::ResidueAdditive, "always".into()),
        (Case::ResidueCase, true) => {
            let v = is_ordering(g, og, trials, seed);
            let d = match v {
                OrderingVerdict::No { .. } => Definable::Yes,
                OrderingVerdict::Unknown { .. } => Definable::OutOfScope,
            };
            side.ordering = Some(v);
            (d, DefinabilityRule::ResidueMultiplicative, "iff the residue image of G with 0 is no ordering".into())
        }
    };
    Ok(DefinabilityVerdict { definable, rule, explanation, side_conditions: side })
}

/// Bounded check of `x^{-1} O_G ⊆ G` over `x ∈ M_G`; decidable only for
/// ideal groups, where it is a cut comparison for each `v(x)`.
fn inverse_ideal_condition(report: &CaseReport, g: &SubgroupDescriptor) -> Result<Answer> {
    let SubgroupDescriptor::IdealGroup { cut } = g else {
        return Ok(Answer::Unknown);
    };
    let og = &report.og;
    let Some(step) = og.min_positive() else {
        // M_G = {0}: nothing to check.
        return Ok(Answer::Yes);
    };
    let depth = cut
        .bound
        .coords()
        .map_or(0, |cs| cs.iter().filter(|c| !super::ideal::is_unbounded(**c)).map(|c| c.abs()).max().unwrap_or(0));
    for n in 1..=depth + 2 {
        let neg: Gamma = step.scale(-n);
        let shifted = FractionalIdealCut::at_least(og, neg)?;
        if !ideal_subset(&shifted, cut)? {
            return Ok(Answer::No);
        }
    }
    Ok(Answer::Unknown)
}

/// Is there `y` with `y^2 - y = q x^2`? Over `Q_q` this holds iff
/// `1 + 4 q x^2` is a square, and it carves out exactly `Z_q`.
pub fn ax_membership(x: &Element) -> Result<bool> {
    let field = x.field();
    let FieldKind::QAdic { q } = field.kind() else {
        return Err(Error::Unsupported(format!("ax_membership needs a q-adic field, got {field}")));
    };
    if x.is_zero() {
        return Ok(true);
    }
    let d = Element::one(field).add(&x.mul(x)?.mul_int(4 * *q as i64)?)?;
    match is_qth_power(&d, 2)? {
        MembershipVerdict::Member { .. } => Ok(true),
        MembershipVerdict::NonMember { .. } => Ok(false),
        MembershipVerdict::Unknown { .. } => Err(exhausted(format!("square test of {d}"))),
    }
}
