//! A deterministic family of zero neighborhoods drawn from the basis `B_G`.
//!
//! Multiplicative `G`: `π^k ((-c G + c h) ∩ (-d G + d h))` with `c/d ∉ G` and
//! `h = π^{2q} ∈ G`. Additive `G`: `π^k {(a x + b)/(x + d) : x ∈ G}` with
//! `d ∉ G`, `a = π/d`, `b = π a`. Both contain zero, and when a nontrivial
//! ring is weakly compatible with `G` they shrink into its maximal ideal.

use rand::Rng;

use super::{member, Neighborhood};
use crate::error::{Error, Result};
use crate::fields::sample::{random_element, Mode};
use crate::fields::{Element, Field, FieldKind};
use crate::subgroups::{subgroup_member, MembershipVerdict, SubgroupDescriptor};

const MAX_SHAPES: usize = 3;
/// Depths tried when searching for a witness.
pub(crate) const DEPTHS: std::ops::RangeInclusive<i64> = -2..=36;
/// Members a candidate must exhibit before it may serve as a witness.
pub(crate) const MIN_POINTS: usize = 4;
const RANDOM_POINTS: usize = 12;
/// Members kept per candidate.
const KEPT_POINTS: usize = 8;

#[derive(Debug, Clone)]
enum Shape {
    Affine { c: Element, d: Element, h: Element },
    Moebius { a: Element, b: Element, d: Element },
}

#[derive(Debug, Clone)]
pub struct ZeroNeighborhoods {
    field: Field,
    g: SubgroupDescriptor,
    pi: Element,
    shapes: Vec<Shape>,
}

fn certified(x: &Element, g: &SubgroupDescriptor, want_member: bool) -> bool {
    if x.is_zero() {
        return false;
    }
    match subgroup_member(x, g) {
        Ok(MembershipVerdict::Member { .. }) => want_member,
        Ok(MembershipVerdict::NonMember { .. }) => !want_member,
        _ => false,
    }
}

/// The scaling element: the first attached prime, `q`, or `t`.
fn scale_element(field: &Field) -> Result<Element> {
    Ok(match field.kind() {
        FieldKind::RationalsAt { primes } => Element::from_int(field, *primes.first().unwrap_or(&2) as i64),
        FieldKind::QAdic { q } => Element::from_int(field, *q as i64),
        FieldKind::Laurent { .. } | FieldKind::CompositeQAdicLaurent { .. } => Element::t(field)?,
    })
}

impl ZeroNeighborhoods {
    pub fn new(field: &Field, g: &SubgroupDescriptor) -> Result<Self> {
        g.validate(field)?;
        let pi = scale_element(field)?;
        let one = Element::one(field);
        let mut shapes = Vec::new();
        if g.is_multiplicative() {
            let q = match g {
                SubgroupDescriptor::PowerGroup { q } => *q as i64,
                _ => 2,
            };
            let h = pi.pow(2 * q)?;
            let mut grid: Vec<Element> = [1i64, -1, 2, -2, 3, -3, 5, 6, 7].iter().map(|&n| Element::from_int(field, n)).collect();
            grid.extend([pi.clone(), pi.neg(), one.add(&pi)?]);
            grid.retain(|x| !x.is_zero());
            if certified(&h, g, true) {
                'outer: for c in &grid {
                    for d in &grid {
                        if shapes.len() == MAX_SHAPES {
                            break 'outer;
                        }
                        if c != d && certified(&c.div(d)?, g, false) {
                            shapes.push(Shape::Affine { c: c.clone(), d: d.clone(), h: h.clone() });
                        }
                    }
                }
            }
        } else {
            let inv = pi.inv()?;
            let two = Element::from_int(field, 2);
            for d in [inv.clone(), inv.neg(), inv.pow(2)?, two.mul(&inv)?, inv.pow(3)?] {
                if shapes.len() == MAX_SHAPES {
                    break;
                }
                if d.is_zero() || !certified(&d, g, false) {
                    continue;
                }
                let a = pi.div(&d)?;
                let b = a.mul(&pi)?;
                shapes.push(Shape::Moebius { a, b, d });
            }
        }
        let fam = Self { field: field.clone(), g: g.clone(), pi, shapes };
        let zero = Element::zero(field);
        let shapes = (0..fam.shapes.len())
            .filter(|&s| fam.get(0, s).and_then(|n| member(&n, &zero)).unwrap_or(false))
            .map(|s| fam.shapes[s].clone())
            .collect();
        Ok(Self { shapes, ..fam })
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    pub fn shape_count(&self) -> usize {
        self.shapes.len()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// The member of depth `k` and shape `s`.
    pub fn get(&self, k: i64, s: usize) -> Result<Neighborhood> {
        let alpha = self.pi.pow(k)?;
        let one = Element::one(&self.field);
        match self.shapes.get(s).ok_or_else(|| Error::InvalidDescriptor(format!("no shape {s}")))? {
            Shape::Affine { c, d, h } => {
                let part = |c: &Element| -> Result<Neighborhood> {
                    let ac = alpha.mul(c)?;
                    Neighborhood::affine(ac.neg(), ac.mul(h)?, &self.g)
                };
                Ok(Neighborhood::Intersection(vec![part(c)?, part(d)?]))
            }
            Shape::Moebius { a, b, d } => Neighborhood::moebius(alpha.mul(a)?, alpha.mul(b)?, one, d.clone(), &self.g),
        }
    }

    /// Candidates in search order: depths `from`, `from + 1`, `from + 2`,
    /// `from + 4`, ... up to the deepest, each with every shape.
    pub fn candidates(&self, from: i64) -> impl Iterator<Item = (i64, usize)> + '_ {
        let from = from.max(*DEPTHS.start());
        let offsets = std::iter::once(0).chain((0..).map(|j| 1i64 << j));
        offsets
            .map(move |o| from + o)
            .take_while(|k| *k <= *DEPTHS.end())
            .flat_map(move |k| (0..self.shapes.len()).map(move |s| (k, s)))
    }

    /// Sampled members of the depth-`k` neighborhood `n` (translated by
    /// `center`), excluding the center itself.
    pub fn points<R: Rng + ?Sized>(&self, n: &Neighborhood, k: i64, center: &Element, rng: &mut R) -> Vec<Element> {
        let alpha = match self.pi.pow(k) {
            Ok(a) => a,
            Err(_) => return vec![],
        };
        let mut pool: Vec<Element> = (0..RANDOM_POINTS).map(|_| random_element(&self.field, rng, 0..=20, Mode::Exact)).collect();
        pool.extend([6, 10, 14, 18, 22].iter().filter_map(|&j| self.pi.pow(j).ok()));
        pool.into_iter()
            .filter_map(|w| alpha.mul(&w).and_then(|z| z.add(center)).ok())
            .filter(|z| matches!(member(n, z), Ok(true)))
            .take(KEPT_POINTS)
            .collect()
    }
}
