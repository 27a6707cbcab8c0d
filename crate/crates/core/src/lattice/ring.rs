//! Members of the canonical coarsening chain.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::algebra::Gamma;
use crate::error::{Error, Result};
use crate::fields::{Field, Stage};

/// Valuation ring at position `chain_index` of the field's chain
/// (0 = the trivial ring `K`, larger = finer).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationRingRef {
    field: Field,
    chain_index: usize,
    stage: Stage,
}

impl ValuationRingRef {
    pub fn new(field: &Field, chain_index: usize) -> Result<Self> {
        let stage = *field.chain().get(chain_index).ok_or_else(|| {
            Error::InvalidDescriptor(format!("{field} has no chain member {chain_index}"))
        })?;
        Ok(Self { field: field.clone(), chain_index, stage })
    }

    pub fn trivial(field: &Field) -> Self {
        Self::new(field, 0).expect("the trivial ring is always on the chain")
    }

    /// Every member of the chain, coarsest first.
    pub fn chain(field: &Field) -> Vec<Self> {
        (0..field.chain().len()).map(|i| Self::new(field, i).unwrap()).collect()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn chain_index(&self) -> usize {
        self.chain_index
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn is_trivial(&self) -> bool {
        self.stage.is_trivial()
    }

    pub fn rank(&self) -> u8 {
        if self.is_trivial() {
            0
        } else {
            self.stage.rank()
        }
    }

    /// Rank of the value group coordinates used for cuts (1 for the trivial ring).
    pub fn coord_rank(&self) -> u8 {
        self.stage.rank()
    }

    pub fn name(&self) -> String {
        self.stage.name()
    }

    pub fn residue_characteristic(&self) -> u64 {
        self.field.residue_characteristic(self.stage)
    }

    /// Does the value group have a minimal positive element?
    pub fn is_discrete(&self) -> bool {
        !self.is_trivial()
    }

    pub fn min_positive(&self) -> Option<Gamma> {
        self.is_discrete().then(|| Gamma::min_positive(self.stage.rank()))
    }

    /// `self ⊇ other`.
    pub fn is_coarsening_of(&self, other: &Self) -> bool {
        self.field == other.field && self.field.is_coarsening(self.stage, other.stage)
    }

    /// Strictly coarser members of the chain.
    pub fn strict_coarsenings(&self) -> Vec<Self> {
        Self::chain(&self.field)
            .into_iter()
            .filter(|o| o != self && o.is_coarsening_of(self))
            .collect()
    }
}

impl fmt::Display for ValuationRingRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl Serialize for ValuationRingRef {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ValuationRingRef", 2)?;
        st.serialize_field("chain_index", &self.chain_index)?;
        st.serialize_field("ring", &self.name())?;
        st.end()
    }
}
