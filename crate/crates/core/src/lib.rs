//! Exact numerics for Bridgeland stability conditions on extremal
//! contractions: Chern-character lattices, central charges, slope functions,
//! Bogomolov-Gieseker margins, simple-object catalogs, b-ranges for the
//! twisted `ch3` positivity, S-equivalence decompositions and a
//! one-parameter wall-crossing engine.
//!
//! All arithmetic is exact (rationals and quadratic surds); nothing in the
//! library uses floating point except the decimal approximations printed
//! next to surd endpoints.

pub mod catalog;
pub mod charges;
pub mod chern;
pub mod cli;
pub mod error;
pub mod inequalities;
pub mod lattice;
pub mod rational;
pub mod sequiv;
pub mod slopes;
pub mod walls;

pub use error::{Error, Result};
pub use lattice::{make_model, ChernVector, ContractionKind, ContractionModel};
pub use rational::Q;
