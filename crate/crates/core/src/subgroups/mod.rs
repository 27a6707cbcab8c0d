//! Subgroups of `(K, +)` and `(K^x, *)` with decidable membership.

pub mod artin_schreier;
pub mod ordering;
pub mod powers;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::Gamma;
use crate::error::{Error, Result};
use crate::fields::{Element, Field, FieldKind};
use crate::lattice::{FractionalIdealCut, ValuationRingRef};

pub use artin_schreier::artin_schreier_member;
pub use ordering::{is_ordering, OrderingVerdict};
pub use powers::is_qth_power;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Additive,
    Multiplicative,
}

type Predicate = dyn Fn(&Element) -> Option<bool> + Send + Sync;

/// A black-box subgroup given by a membership predicate (`None` = unknown).
#[derive(Clone)]
pub struct Oracle {
    pub name: String,
    pub flavor: Flavor,
    predicate: Arc<Predicate>,
}

impl Oracle {
    pub fn new(
        name: impl Into<String>,
        flavor: Flavor,
        predicate: impl Fn(&Element) -> Option<bool> + Send + Sync + 'static,
    ) -> Self {
        Self { name: name.into(), flavor, predicate: Arc::new(predicate) }
    }

    /// The whole group `K` or `K^x`.
    pub fn everything(flavor: Flavor) -> Self {
        Self::new("everything", flavor, |_| Some(true))
    }

    pub fn test(&self, x: &Element) -> Option<bool> {
        (self.predicate)(x)
    }
}

impl fmt::Debug for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Oracle({})", self.name)
    }
}

#[derive(Debug, Clone)]
pub enum SubgroupDescriptor {
    PowerGroup { q: u64 },
    ArtinSchreier { p: u64 },
    IdealGroup { cut: FractionalIdealCut },
    Oracle(Oracle),
}

impl SubgroupDescriptor {
    pub fn flavor(&self) -> Flavor {
        match self {
            Self::PowerGroup { .. } => Flavor::Multiplicative,
            Self::ArtinSchreier { .. } | Self::IdealGroup { .. } => Flavor::Additive,
            Self::Oracle(o) => o.flavor,
        }
    }

    pub fn is_multiplicative(&self) -> bool {
        self.flavor() == Flavor::Multiplicative
    }

    /// Checks the descriptor against the field it will be used with.
    pub fn validate(&self, field: &Field) -> Result<()> {
        match self {
            Self::PowerGroup { q } if !crate::algebra::finite_field::is_prime(*q) => {
                Err(Error::InvalidDescriptor(format!("{q} is not prime")))
            }
            Self::ArtinSchreier { p } if field.characteristic() != *p => Err(Error::InvalidDescriptor(format!(
                "as({p}) needs characteristic {p}, but {field} has characteristic {}",
                field.characteristic()
            ))),
            Self::IdealGroup { cut } if cut.ring.field() != field => Err(Error::RingMismatch),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for SubgroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PowerGroup { q } => write!(f, "pow({q})"),
            Self::ArtinSchreier { p } => write!(f, "as({p})"),
            Self::IdealGroup { cut } => write!(f, "ideal(>={})", cut.bound),
            Self::Oracle(o) => write!(f, "oracle({})", o.name),
        }
    }
}

impl Serialize for SubgroupDescriptor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Evidence that an element lies in the subgroup.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `root^q = x`.
    Root { q: u64, root: Element },
    /// `root^p - root = x`.
    ArtinSchreierRoot { p: u64, root: Element },
    /// `val(x)` meets the cut.
    InCut { valuation: Gamma },
    Oracle,
}

/// Typed reasons for non-membership.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `val(x)` is not divisible by `q`.
    ValuationIndivisible { valuation: Gamma, q: u64 },
    /// The residue of the unit part is not a `q`-th power in the residue field.
    ResidueClass { residue: String, residue_field: String, q: u64 },
    /// `q = 2` over `Q_2`: the unit part is not `1 mod 8`.
    Mod8 { residue: u64 },
    /// `q` odd over `Q_q`: `u * teich(u)^{-1}` is not `1 mod q^2`.
    PrincipalUnit { class: u64, modulus: u64 },
    /// Over `Q`: numerator or denominator is not a perfect power.
    NotPerfectPower { part: String, q: u64 },
    /// Over `Q` with `q` even: negative numbers are not powers.
    Sign,
    /// In characteristic `q`: a term `c t^e` with `q` not dividing `e`.
    InseparableTerm { exponent: i64 },
    /// Artin-Schreier: the constant term has nonzero absolute trace.
    Trace { residue: String, trace: u64 },
    /// `val(x)` falls short of the cut.
    IdealCut { valuation: Gamma, cut: String },
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "answer", rename_all = "snake_case")]
pub enum MembershipVerdict {
    Member { witness: Witness },
    NonMember { certificate: Certificate },
    Unknown { budget: usize },
}

impl MembershipVerdict {
    pub fn is_member(&self) -> bool {
        matches!(self, Self::Member { .. })
    }

    pub fn is_non_member(&self) -> bool {
        matches!(self, Self::NonMember { .. })
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Self::Member { .. } => Some(true),
            Self::NonMember { .. } => Some(false),
            Self::Unknown { .. } => None,
        }
    }

    pub(crate) fn non_member(certificate: Certificate) -> Self {
        Self::NonMember { certificate }
    }

    pub(crate) fn member(witness: Witness) -> Self {
        Self::Member { witness }
    }
}

pub fn subgroup_member(x: &Element, g: &SubgroupDescriptor) -> Result<MembershipVerdict> {
    match g {
        SubgroupDescriptor::PowerGroup { q } => is_qth_power(x, *q),
        SubgroupDescriptor::ArtinSchreier { p } => artin_schreier_member(x, *p),
        SubgroupDescriptor::IdealGroup { cut } => {
            if cut.member(x)? {
                let valuation = x.val_at(cut.ring.stage()).unwrap_or(Gamma::Infinity);
                Ok(MembershipVerdict::member(Witness::InCut { valuation }))
            } else {
                Ok(MembershipVerdict::non_member(Certificate::IdealCut {
                    valuation: x.val_at(cut.ring.stage())?,
                    cut: cut.to_string(),
                }))
            }
        }
        SubgroupDescriptor::Oracle(o) => {
            if o.flavor == Flavor::Multiplicative && x.is_zero() {
                return Err(Error::ZeroInput);
            }
            Ok(match o.test(x) {
                Some(true) => MembershipVerdict::member(Witness::Oracle),
                Some(false) => MembershipVerdict::non_member(Certificate::Oracle),
                None => MembershipVerdict::Unknown { budget: 0 },
            })
        }
    }
}

/// Re-checks a witness by independent arithmetic: `root^q = x`,
/// `root^p - root = x`, or membership in the cut.
pub fn witness_verifies(x: &Element, w: &Witness) -> bool {
    match w {
        Witness::Root { q, root } => root.pow(*q as i64).map_or(false, |y| y.eq_prec(x)),
        Witness::ArtinSchreierRoot { p, root } => root
            .pow(*p as i64)
            .and_then(|y| y.sub(root))
            .map_or(false, |y| y.eq_prec(x)),
        Witness::InCut { .. } | Witness::Oracle => true,
    }
}

/// The case of a subgroup relative to the valuation ring it induces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Case {
    #[serde(rename = "group")]
    GroupCase,
    #[serde(rename = "weak")]
    WeakCase,
    #[serde(rename = "residue")]
    ResidueCase,
}

/// Membership of `residue(x)` in the residue subgroup `G-bar`.
///
/// In the group and residue cases `x-bar in G-bar` iff `x in G`, so the
/// answer is read off `x` itself.
pub fn residue_subgroup_member(
    x: &Element,
    g: &SubgroupDescriptor,
    ring: &ValuationRingRef,
    case: Case,
) -> Result<MembershipVerdict> {
    if case == Case::WeakCase {
        return Err(Error::CaseViolation);
    }
    let stage = ring.stage();
    if g.is_multiplicative() {
        if x.val_at(stage)? != Gamma::zero(stage.rank()) {
            return Err(Error::HypothesisViolation(format!("{x} is not a unit of {ring}")));
        }
    } else if x.val_at(stage)?.is_negative() {
        return Err(Error::NegativeValuation);
    }
    subgroup_member(x, g)
}

/// Does `K` contain a primitive `q`-th root of unity?
pub fn has_root_of_unity(field: &Field, q: u64) -> bool {
    match field.kind() {
        FieldKind::RationalsAt { .. } => q == 2,
        FieldKind::QAdic { q: p } | FieldKind::CompositeQAdicLaurent { q: p } => q == 2 || (p - 1) % q == 0,
        FieldKind::Laurent { p, k } => {
            q != *p && field.finite_field().map_or(false, |f| (f.order() - 1) % q as u128 == 0) && *k >= 1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FieldDescriptor;

    #[test]
    fn roots_of_unity() {
        let k = |d| Field::new(d).unwrap();
        assert!(has_root_of_unity(&k(FieldDescriptor::qadic(5, 16)), 2));
        assert!(!has_root_of_unity(&k(FieldDescriptor::qadic(2, 16)), 3));
        assert!(has_root_of_unity(&k(FieldDescriptor::laurent(3, 2, 16)), 2));
        assert!(!has_root_of_unity(&k(FieldDescriptor::laurent(3, 2, 16)), 3));
        assert!(has_root_of_unity(&k(FieldDescriptor::qadic(7, 16)), 3));
    }

    #[test]
    fn ideal_and_oracle_membership() {
        let l = Field::new(FieldDescriptor::laurent(3, 1, 16)).unwrap();
        let o = ValuationRingRef::new(&l, 1).unwrap();
        let g = SubgroupDescriptor::IdealGroup { cut: FractionalIdealCut::whole_ring(&o) };
        let t2 = Element::t(&l).unwrap().pow(2).unwrap();
        assert!(subgroup_member(&t2, &g).unwrap().is_member());
        assert!(subgroup_member(&t2.inv().unwrap(), &g).unwrap().is_non_member());
        let all = SubgroupDescriptor::Oracle(Oracle::everything(Flavor::Additive));
        assert!(subgroup_member(&t2, &all).unwrap().is_member());
    }

    #[test]
    fn semantic_validation() {
        let q2 = Field::new(FieldDescriptor::qadic(2, 16)).unwrap();
        assert!(SubgroupDescriptor::ArtinSchreier { p: 2 }.validate(&q2).is_err());
        assert!(SubgroupDescriptor::PowerGroup { q: 4 }.validate(&q2).is_err());
    }
}
