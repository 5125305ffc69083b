//! Exact finite-stage models of Rademacher families in Boolean algebras.
//!
//! The crate builds concrete Boolean algebras over exact scalars, families
//! of generators inside them, and the objects that sit on top: particles,
//! the dyadic measure, Haar systems, step elements of a Riesz space, their
//! integrals, and finite probability-space representations. Every claim
//! about an infinite family is checked at a finite depth and labelled as a
//! certificate at that depth.

pub mod algebra;
pub mod budget;
pub mod error;
pub mod family;
pub mod integration;
pub mod representation;
pub mod riesz;
pub mod scalar;

pub use error::{Error, Result};
