//! Valuation rings, ideals and the classification of subgroup-induced rings.

pub mod approx;
pub mod classify;
pub mod compat;
pub mod definability;
pub mod henselian;
pub mod ideal;
pub mod pipeline;
pub mod ring;

pub use ideal::{FractionalIdealCut, IdealOp, IdealResult};
pub use ring::ValuationRingRef;
