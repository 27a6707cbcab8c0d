//! Concrete valued fields and their elements.

pub mod element;
pub mod hensel;
pub mod literal;
pub mod padic;
pub mod sample;
pub mod series;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::finite_field::is_prime;
use crate::algebra::FiniteField;
use crate::error::{Error, Result};
use padic::PAdicCtx;

pub use element::{Element, Residue, Value};
pub use padic::QNum;
pub use series::Series;

/// What is known about a valuation computed from truncated data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound<T> {
    Infinite,
    Exact(T),
    AtLeast(T),
}

pub const DEFAULT_PRECISION: u32 = 64;
pub const MIN_PRECISION: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldKind {
    RationalsAt { primes: Vec<u64> },
    QAdic { q: u64 },
    Laurent { p: u64, k: u32 },
    CompositeQAdicLaurent { q: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FieldDescriptor {
    pub kind: FieldKind,
    pub precision: u32,
}

impl FieldDescriptor {
    pub fn rationals(primes: &[u64]) -> Self {
        Self { kind: FieldKind::RationalsAt { primes: primes.to_vec() }, precision: DEFAULT_PRECISION }
    }

    pub fn qadic(q: u64, precision: u32) -> Self {
        Self { kind: FieldKind::QAdic { q }, precision }
    }

    pub fn laurent(p: u64, k: u32, precision: u32) -> Self {
        Self { kind: FieldKind::Laurent { p, k }, precision }
    }

    pub fn composite(q: u64, precision: u32) -> Self {
        Self { kind: FieldKind::CompositeQAdicLaurent { q }, precision }
    }
}

impl fmt::Display for FieldDescriptor {
    /// Same syntax as the command-line field specs.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FieldKind::RationalsAt { primes } => {
                let ps: Vec<String> = primes.iter().map(|p| p.to_string()).collect();
                write!(f, "Q[{}]", ps.join(","))
            }
            FieldKind::QAdic { q } => write!(f, "Qp:{q}:prec={}", self.precision),
            FieldKind::Laurent { p, k } => write!(f, "Laurent:{p}^{k}:prec={}", self.precision),
            FieldKind::CompositeQAdicLaurent { q } => write!(f, "Comp:{q}:prec={}", self.precision),
        }
    }
}

/// A member of the canonical coarsening chain of a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    /// The trivial valuation ring `K`.
    Trivial,
    /// `Z_(p)` inside `Q`.
    Localization(u64),
    /// `Z_q` inside `Q_q`.
    PAdicIntegers,
    /// `F[[t]]` inside `F((t))`.
    PowerSeries,
    /// The `t`-adic ring of `Q_q((t))`, residue field `Q_q`.
    TAdic,
    /// The rank-2 ring of `Q_q((t))`, residue field `F_q`.
    Composite,
}

impl Stage {
    pub fn rank(&self) -> u8 {
        match self {
            Stage::Composite => 2,
            _ => 1,
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, Stage::Trivial)
    }

    pub fn name(&self) -> String {
        match self {
            Stage::Trivial => "K".into(),
            Stage::Localization(p) => format!("Z_({p})"),
            Stage::PAdicIntegers => "Z_q".into(),
            Stage::PowerSeries => "F[[t]]".into(),
            Stage::TAdic => "O_t".into(),
            Stage::Composite => "O_comp".into(),
        }
    }
}

#[derive(Debug)]
struct FieldInner {
    desc: FieldDescriptor,
    finite: Option<Arc<FiniteField>>,
    padic: Option<Arc<PAdicCtx>>,
}

/// A validated field descriptor together with its arithmetic contexts.
#[derive(Debug, Clone)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.desc == other.0.desc
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(desc: FieldDescriptor) -> Result<Self> {
        if desc.precision < MIN_PRECISION {
            return Err(Error::InvalidDescriptor(format!(
                "precision {} is below the minimum {MIN_PRECISION}",
                desc.precision
            )));
        }
        let (finite, padic) = match &desc.kind {
            FieldKind::RationalsAt { primes } => {
                for (i, p) in primes.iter().enumerate() {
                    if !is_prime(*p) {
                        return Err(Error::InvalidDescriptor(format!("{p} is not prime")));
                    }
                    if primes[..i].contains(p) {
                        return Err(Error::InvalidDescriptor(format!("prime {p} listed twice")));
                    }
                }
                match primes.first() {
                    Some(&p) => (Some(FiniteField::new(p, 1)?), None),
                    None => (None, None),
                }
            }
            FieldKind::QAdic { q } | FieldKind::CompositeQAdicLaurent { q } => (
                Some(FiniteField::new(*q, 1)?),
                Some(PAdicCtx::new(*q, desc.precision)),
            ),
            FieldKind::Laurent { p, k } => (Some(FiniteField::new(*p, *k)?), None),
        };
        Ok(Self(Arc::new(FieldInner { desc, finite, padic })))
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.0.desc
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0.desc.kind
    }

    pub fn precision(&self) -> u32 {
        self.0.desc.precision
    }

    /// Residue field of the finest ring on the chain, when finite.
    pub fn finite_field(&self) -> Option<&Arc<FiniteField>> {
        self.0.finite.as_ref()
    }

    pub fn padic_ctx(&self) -> Option<&Arc<PAdicCtx>> {
        self.0.padic.as_ref()
    }

    pub fn characteristic(&self) -> u64 {
        match self.kind() {
            FieldKind::Laurent { p, .. } => *p,
            _ => 0,
        }
    }

    /// The prime `q` of `Q_q` or of the composite field.
    pub fn qadic_prime(&self) -> Option<u64> {
        match self.kind() {
            FieldKind::QAdic { q } | FieldKind::CompositeQAdicLaurent { q } => Some(*q),
            _ => None,
        }
    }

    /// The canonical coarsening chain, coarsest first.
    pub fn chain(&self) -> Vec<Stage> {
        let mut out = vec![Stage::Trivial];
        match self.kind() {
            FieldKind::RationalsAt { primes } => out.extend(primes.iter().map(|&p| Stage::Localization(p))),
            FieldKind::QAdic { .. } => out.push(Stage::PAdicIntegers),
            FieldKind::Laurent { .. } => out.push(Stage::PowerSeries),
            FieldKind::CompositeQAdicLaurent { .. } => {
                out.push(Stage::TAdic);
                out.push(Stage::Composite);
            }
        }
        out
    }

    /// The ring whose valuation `Element::val` reports.
    pub fn natural_stage(&self) -> Stage {
        match self.kind() {
            FieldKind::RationalsAt { primes } => match primes.first() {
                Some(&p) => Stage::Localization(p),
                None => Stage::Trivial,
            },
            FieldKind::QAdic { .. } => Stage::PAdicIntegers,
            FieldKind::Laurent { .. } => Stage::PowerSeries,
            FieldKind::CompositeQAdicLaurent { .. } => Stage::Composite,
        }
    }

    /// Characteristic of the residue field of a chain member.
    pub fn residue_characteristic(&self, stage: Stage) -> u64 {
        match stage {
            Stage::Trivial => self.characteristic(),
            Stage::Localization(p) => p,
            Stage::PAdicIntegers | Stage::Composite => self.qadic_prime().unwrap_or(0),
            Stage::PowerSeries => self.characteristic(),
            Stage::TAdic => 0,
        }
    }

    /// Residue field of a rank-one stage, when it is finite.
    pub fn residue_field(&self, stage: Stage) -> Option<Arc<FiniteField>> {
        match stage {
            Stage::Localization(p) => FiniteField::new(p, 1).ok(),
            Stage::PAdicIntegers | Stage::PowerSeries | Stage::Composite => self.0.finite.clone(),
            Stage::Trivial | Stage::TAdic => None,
        }
    }

    /// Is `coarse` a coarsening of (contains) `fine`?
    ///
    /// The localizations of `Q` at distinct primes are pairwise incomparable;
    /// every other chain is totally ordered by position.
    pub fn is_coarsening(&self, coarse: Stage, fine: Stage) -> bool {
        if coarse == fine || coarse.is_trivial() {
            return true;
        }
        match (coarse, fine) {
            (Stage::Localization(_), _) | (_, Stage::Localization(_)) => false,
            (Stage::TAdic, Stage::Composite) => true,
            _ => false,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.desc)
    }
}
