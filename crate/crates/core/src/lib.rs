//! Valuation rings induced by subgroups of concrete valued fields.

pub mod algebra;
pub mod error;

pub mod fields;
pub mod lattice;
pub mod subgroups;
pub mod topology;

pub use error::{Error, Result};
