//! Cohomology of posets, operadic poset species and the operads they carry.
//!
//! The crate is organised bottom-up: [`poset`] holds finite posets and
//! order-theoretic tools, [`cohomology`] builds the four cochain complexes,
//! [`species`] and [`catalog`] describe families `n ↦ P(n)` with their
//! structure maps, [`operad`] turns these into operads on cohomology and
//! [`series`] handles generating series.

pub mod catalog;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod linalg;
pub mod operad;
pub mod partition;
pub mod poset;
pub mod series;
pub mod set_operads;
pub mod species;

pub use error::{Error, Result};
