//! Exact arithmetic substrate.

pub mod finite_field;
pub mod polynomial;
pub mod rational;
pub mod value_group;

pub use finite_field::{irreducible_modulus, FiniteField, FiniteFieldElement, Fq};
pub use polynomial::{Polynomial, RingElement};
pub use rational::Rational;
pub use value_group::{Gamma, ValueGroupElement};
