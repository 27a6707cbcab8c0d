//! Lexicographically ordered value groups `Z` and `Z x Z`, extended by an
//! absorbing top element.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// An element of `Z^rank` (rank 1 or 2) or the distinguished `Infinity`.
///
/// For rank 2 the first coordinate is the most significant one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValueGroupElement {
    Finite { rank: u8, coords: [i64; 2] },
    Infinity,
}

pub use ValueGroupElement as Gamma;

impl ValueGroupElement {
    pub const fn int(n: i64) -> Self {
        Self::Finite { rank: 1, coords: [n, 0] }
    }

    pub const fn pair(a: i64, b: i64) -> Self {
        Self::Finite { rank: 2, coords: [a, b] }
    }

    pub const fn zero(rank: u8) -> Self {
        Self::Finite { rank, coords: [0, 0] }
    }

    /// Minimal positive element of `Z` or `Z x Z` lex.
    pub const fn min_positive(rank: u8) -> Self {
        if rank == 1 {
            Self::int(1)
        } else {
            Self::pair(0, 1)
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Self::Infinity)
    }

    pub fn rank(&self) -> Option<u8> {
        match self {
            Self::Finite { rank, .. } => Some(*rank),
            Self::Infinity => None,
        }
    }

    pub fn coords(&self) -> Option<&[i64]> {
        match self {
            Self::Finite { rank, coords } => Some(&coords[..*rank as usize]),
            Self::Infinity => None,
        }
    }

    /// The single coordinate of a rank-1 element.
    pub fn as_int(&self) -> Option<i64> {
        match self {
            Self::Finite { rank: 1, coords } => Some(coords[0]),
            _ => None,
        }
    }

    pub fn as_pair(&self) -> Option<(i64, i64)> {
        match self {
            Self::Finite { rank: 2, coords } => Some((coords[0], coords[1])),
            _ => None,
        }
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        match (self.rank(), other.rank()) {
            (Some(a), Some(b)) if a != b => Err(Error::RankMismatch(a, b)),
            _ => Ok(()),
        }
    }

    /// Total order with `Infinity` on top.
    pub fn compare(&self, other: &Self) -> Result<Ordering> {
        self.check_rank(other)?;
        Ok(match (self, other) {
            (Self::Infinity, Self::Infinity) => Ordering::Equal,
            (Self::Infinity, _) => Ordering::Greater,
            (_, Self::Infinity) => Ordering::Less,
            (Self::Finite { coords: a, .. }, Self::Finite { coords: b, .. }) => a.cmp(b),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        Ok(match (self, other) {
            (Self::Finite { rank, coords: a }, Self::Finite { coords: b, .. }) => Self::Finite {
                rank: *rank,
                coords: [a[0] + b[0], a[1] + b[1]],
            },
            _ => Self::Infinity,
        })
    }

    /// Negation; `Infinity` has no inverse.
    pub fn neg(&self) -> Option<Self> {
        match self {
            Self::Finite { rank, coords } => Some(Self::Finite {
                rank: *rank,
                coords: [-coords[0], -coords[1]],
            }),
            Self::Infinity => None,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let neg = other
            .neg()
            .ok_or_else(|| Error::Unsupported("subtracting infinity".into()))?;
        self.add(&neg)
    }

    pub fn scale(&self, k: i64) -> Self {
        match self {
            Self::Finite { rank, coords } => Self::Finite {
                rank: *rank,
                coords: [coords[0] * k, coords[1] * k],
            },
            Self::Infinity => Self::Infinity,
        }
    }

    /// The next element up; the value groups here are discrete.
    pub fn succ(&self) -> Self {
        match self {
            Self::Finite { rank: 1, coords } => Self::int(coords[0] + 1),
            Self::Finite { coords, .. } => Self::pair(coords[0], coords[1] + 1),
            Self::Infinity => Self::Infinity,
        }
    }

    pub fn max(self, other: Self) -> Result<Self> {
        Ok(if self.compare(&other)? == Ordering::Less { other } else { self })
    }

    pub fn min(self, other: Self) -> Result<Self> {
        Ok(if self.compare(&other)? == Ordering::Greater { other } else { self })
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Self::Finite { coords, .. } => *coords > [0, 0],
            Self::Infinity => true,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Self::Finite { coords, .. } => *coords < [0, 0],
            Self::Infinity => false,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Finite { coords: [0, 0], .. })
    }

    /// Is every coordinate divisible by `q`?
    pub fn divisible_by(&self, q: i64) -> bool {
        match self {
            Self::Finite { coords, .. } => coords[0] % q == 0 && coords[1] % q == 0,
            Self::Infinity => true,
        }
    }

    pub fn div_exact(&self, q: i64) -> Option<Self> {
        if !self.divisible_by(q) {
            return None;
        }
        Some(match self {
            Self::Finite { rank, coords } => Self::Finite {
                rank: *rank,
                coords: [coords[0] / q, coords[1] / q],
            },
            Self::Infinity => Self::Infinity,
        })
    }

    /// `true` iff `self >= other`; rank mismatches count as incomparable.
    pub fn ge(&self, other: &Self) -> bool {
        matches!(self.compare(other), Ok(Ordering::Greater | Ordering::Equal))
    }

    pub fn gt(&self, other: &Self) -> bool {
        matches!(self.compare(other), Ok(Ordering::Greater))
    }
}

impl fmt::Display for ValueGroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite { rank: 1, coords } => write!(f, "{}", coords[0]),
            Self::Finite { coords, .. } => write!(f, "({},{})", coords[0], coords[1]),
            Self::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for ValueGroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lex_order_examples() {
        let a = Gamma::pair(1, 0);
        let b = Gamma::pair(0, 99);
        assert_eq!(a.compare(&b).unwrap(), Ordering::Greater);
        assert_eq!(
            Gamma::pair(0, 3).compare(&Gamma::pair(0, 3)).unwrap(),
            Ordering::Equal
        );
        for x in [Gamma::int(-5), Gamma::int(1 << 40), Gamma::pair(7, -7)] {
            assert_eq!(x.compare(&Gamma::Infinity).unwrap(), Ordering::Less);
        }
    }

    #[test]
    fn rank_mismatch() {
        assert_eq!(
            Gamma::int(1).compare(&Gamma::pair(0, 1)),
            Err(Error::RankMismatch(1, 2))
        );
        assert!(Gamma::int(1).add(&Gamma::pair(1, 1)).is_err());
    }

    #[test]
    fn infinity_absorbs() {
        assert_eq!(Gamma::int(3).add(&Gamma::Infinity).unwrap(), Gamma::Infinity);
        assert_eq!(Gamma::Infinity.neg(), None);
    }

    #[test]
    fn succ_and_min_positive() {
        assert_eq!(Gamma::int(1).succ(), Gamma::int(2));
        assert_eq!(Gamma::pair(2, 5).succ(), Gamma::pair(2, 6));
        assert_eq!(Gamma::min_positive(2), Gamma::pair(0, 1));
    }

    fn gamma2() -> impl Strategy<Value = Gamma> {
        (-50i64..50, -50i64..50).prop_map(|(a, b)| Gamma::pair(a, b))
    }

    proptest! {
        #[test]
        fn total_order(a in gamma2(), b in gamma2(), c in gamma2()) {
            let ab = a.compare(&b).unwrap();
            prop_assert_eq!(ab.reverse(), b.compare(&a).unwrap());
            if ab != Ordering::Greater && b.compare(&c).unwrap() != Ordering::Greater {
                prop_assert_ne!(a.compare(&c).unwrap(), Ordering::Greater);
            }
            if ab == Ordering::Equal {
                prop_assert_eq!(a, b);
            }
        }

        #[test]
        fn translation_invariant(a in gamma2(), b in gamma2(), c in gamma2()) {
            if a.compare(&b).unwrap() == Ordering::Less {
                let ac = a.add(&c).unwrap();
                let bc = b.add(&c).unwrap();
                prop_assert_eq!(ac.compare(&bc).unwrap(), Ordering::Less);
            }
        }

        #[test]
        fn rank_one_translation(a in -1000i64..1000, b in -1000i64..1000, c in -1000i64..1000) {
            let (a, b, c) = (Gamma::int(a), Gamma::int(b), Gamma::int(c));
            if a.gt(&b) {
                prop_assert!(a.add(&c).unwrap().gt(&b.add(&c).unwrap()));
            }
        }
    }
}
