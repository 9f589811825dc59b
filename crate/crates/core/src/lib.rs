//! Exact computer algebra for finite-dimensional Lie algebras given by
//! structure constants.

pub mod coadjoint;
pub mod error;
pub mod exterior;
pub mod families;
pub mod io;
pub mod liealg;
pub mod ring;
pub mod structure;
pub mod suite;

pub use error::{Error, Result};
