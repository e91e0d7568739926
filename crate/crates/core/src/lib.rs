//! Casimir-Polder potentials of atoms near metal surfaces, in and out of
//! thermal equilibrium, with plasmonic and laser-driven contributions.

pub mod constants;
pub mod error;
pub mod atom;
pub mod materials;
pub mod numerics;
pub mod potentials;
pub mod spectral;
pub mod laser;
pub mod landscape;

pub use error::{Error, Result};
