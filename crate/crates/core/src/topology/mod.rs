//! The topology induced by a subgroup: valuation balls, affine and Möbius
//! images of `G`, constructive witnesses for the V-topology axioms and a
//! sampling checker for them.

mod check;
mod equivalence;
mod family;

use std::fmt;

use serde::Serialize;

use crate::algebra::Gamma;
use crate::error::{exhausted, Error, Result};
use crate::fields::Element;
use crate::lattice::ValuationRingRef;
use crate::subgroups::{subgroup_member, MembershipVerdict, SubgroupDescriptor};

pub use check::{check_v_axioms, vtop_report, Basis, VtopReport};
pub use equivalence::{basis_equivalence_check, Direction, EquivalenceReport, EquivalenceStatus};
pub use family::ZeroNeighborhoods;

/// A subset of `K` given by a finite description.
#[derive(Debug, Clone)]
pub enum Neighborhood {
    /// `{x : v(x - center) > radius}`, or `>=` when not strict.
    Ball { ring: ValuationRingRef, center: Element, radius: Gamma, strict: bool },
    /// `{(a x + b) / (c x + d) : x ∈ G, c x != -d}` for additive `G`.
    MoebiusImage { a: Element, b: Element, c: Element, d: Element, g: SubgroupDescriptor },
    /// `a G + b` for multiplicative `G`.
    AffineImage { a: Element, b: Element, g: SubgroupDescriptor },
    Intersection(Vec<Neighborhood>),
}

impl Neighborhood {
    pub fn ball(ring: &ValuationRingRef, center: Element, radius: Gamma, strict: bool) -> Self {
        Self::Ball { ring: ring.clone(), center, radius, strict }
    }

    pub fn moebius(a: Element, b: Element, c: Element, d: Element, g: &SubgroupDescriptor) -> Result<Self> {
        if a.mul(&d)?.sub(&b.mul(&c)?)?.is_zero() {
            return Err(Error::InvalidDescriptor("Möbius transform with ad - bc = 0".into()));
        }
        Ok(Self::MoebiusImage { a, b, c, d, g: g.clone() })
    }

    pub fn affine(a: Element, b: Element, g: &SubgroupDescriptor) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::InvalidDescriptor("affine image with a = 0".into()));
        }
        Ok(Self::AffineImage { a, b, g: g.clone() })
    }

    /// `self + t`.
    pub fn translate(&self, t: &Element) -> Result<Self> {
        Ok(match self {
            Self::Ball { ring, center, radius, strict } => {
                Self::Ball { ring: ring.clone(), center: center.add(t)?, radius: *radius, strict: *strict }
            }
            // (a x + b)/(c x + d) + t = ((a + t c) x + (b + t d)) / (c x + d)
            Self::MoebiusImage { a, b, c, d, g } => Self::MoebiusImage {
                a: a.add(&t.mul(c)?)?,
                b: b.add(&t.mul(d)?)?,
                c: c.clone(),
                d: d.clone(),
                g: g.clone(),
            },
            Self::AffineImage { a, b, g } => Self::AffineImage { a: a.clone(), b: b.add(t)?, g: g.clone() },
            Self::Intersection(parts) => Self::Intersection(parts.iter().map(|n| n.translate(t)).collect::<Result<_>>()?),
        })
    }

    /// Is this a ball around zero? Returns its ring, radius and strictness.
    pub fn as_zero_ball(&self) -> Option<(&ValuationRingRef, Gamma, bool)> {
        match self {
            Self::Ball { ring, center, radius, strict } if center.is_zero() => Some((ring, *radius, *strict)),
            _ => None,
        }
    }
}

impl fmt::Display for Neighborhood {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Ball { ring, center, radius, strict } => {
                let op = if *strict { ">" } else { ">=" };
                write!(f, "ball[{ring}](v(x - {center}) {op} {radius})")
            }
            Self::MoebiusImage { a, b, c, d, g } => write!(f, "(({a})x + {b})/(({c})x + {d}), x in {g}"),
            Self::AffineImage { a, b, g } => write!(f, "({a}) {g} + {b}"),
            Self::Intersection(parts) => {
                let s: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", s.join(" & "))
            }
        }
    }
}

impl Serialize for Neighborhood {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn in_group(x: &Element, g: &SubgroupDescriptor) -> Result<bool> {
    if g.is_multiplicative() && x.is_zero() {
        return Ok(false);
    }
    match subgroup_member(x, g)? {
        MembershipVerdict::Member { .. } => Ok(true),
        MembershipVerdict::NonMember { .. } => Ok(false),
        MembershipVerdict::Unknown { budget } => Err(Error::Undecided(format!("membership of {x} in {g} after {budget} steps"))),
    }
}

/// Membership in a neighborhood. Möbius and affine images are decided by
/// pulling `x` back along the inverse transform.
pub fn member(n: &Neighborhood, x: &Element) -> Result<bool> {
    match n {
        Neighborhood::Ball { ring, center, radius, strict } => {
            let d = x.sub(center)?;
            if d.is_zero() {
                return Ok(true);
            }
            d.val_at_least(ring.stage(), radius, *strict)
                .ok_or_else(|| exhausted(format!("cannot compare v({d}) with {radius}")))
        }
        Neighborhood::MoebiusImage { a, b, c, d, g } => {
            let den = a.sub(&c.mul(x)?)?;
            if den.is_zero() {
                return Ok(false);
            }
            if den.is_negligible() {
                return Err(exhausted(format!("denominator of the pullback of {x}")));
            }
            in_group(&d.mul(x)?.sub(b)?.div(&den)?, g)
        }
        Neighborhood::AffineImage { a, b, g } => in_group(&x.sub(b)?.div(a)?, g),
        Neighborhood::Intersection(parts) => {
            for p in parts {
                if !member(p, x)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Axiom {
    V1,
    V2,
    V3,
    V4,
    V5,
    V6,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [Axiom::V1, Axiom::V2, Axiom::V3, Axiom::V4, Axiom::V5, Axiom::V6];
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Constructive witness `V` for a ball `U` around zero of radius `g`.
///
/// V3: `V = U`. V4: radius `max(g - v(x), g - v(y), g, 0)`. V5: radius
/// `max(g + 2 v(x), v(x))`. V6: radius `2 g`. All strict except V6, which
/// keeps the strictness of `U`.
pub fn v_axiom_witness(axiom: Axiom, u: &Neighborhood, x: Option<&Element>, y: Option<&Element>) -> Result<Neighborhood> {
    let (ring, g, strict) = u.as_zero_ball().ok_or(Error::UnsupportedBasis)?;
    let field = ring.field();
    let stage = ring.stage();
    let zero = Element::zero(field);
    let ball = |r: Gamma, s: bool| Neighborhood::ball(ring, zero.clone(), r, s);
    fn need(e: Option<&Element>) -> Result<&Element> {
        e.ok_or_else(|| Error::InvalidDescriptor("V4 needs x and y, V5 needs x".into()))
    }
    match axiom {
        Axiom::V3 => Ok(u.clone()),
        Axiom::V4 => {
            let mut r = g.max(Gamma::zero(g.rank().unwrap_or(1)))?;
            for e in [need(x)?, need(y)?] {
                if !e.is_zero() {
                    r = r.max(g.sub(&e.val_at(stage)?)?)?;
                }
            }
            Ok(ball(r, true))
        }
        Axiom::V5 => {
            let x = need(x)?;
            if x.is_zero() {
                return Err(Error::ZeroInput);
            }
            let v = x.val_at(stage)?;
            Ok(ball(g.add(&v.scale(2))?.max(v)?, true))
        }
        Axiom::V6 => Ok(ball(g.scale(2), strict)),
        Axiom::V1 | Axiom::V2 => Err(Error::Unsupported(format!("{axiom} has no single-ball witness"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    /// An explicit counterexample to the constructed witness.
    Refuted,
    /// The bounded search produced no witness; not a refutation.
    NoWitnessFound,
    /// Precision ran out before membership was settled.
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomFailure {
    pub kind: FailureKind,
    pub trial: usize,
    pub inputs: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub trials: usize,
    pub seed: u64,
    pub witness_rule: String,
    /// Total failures; only the first few are listed.
    pub failure_count: usize,
    pub failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    pub fn count(&self, kind: FailureKind) -> usize {
        self.failures.iter().filter(|f| f.kind == kind).count()
    }
}
