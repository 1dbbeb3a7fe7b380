//! Exact simulation of polarization-encoded linear-optical circuits.
//!
//! States are sparse superpositions of Fock basis kets over labeled
//! (spatial path × polarization) modes. Optical elements lower to mode
//! unitaries acting on creation operators; evolution expands each basis ket
//! exactly, and coincidence post-selection projects onto one photon per
//! monitored path. A Ryser permanent supplies an independent amplitude
//! oracle.

pub mod analysis;
pub mod elements;
pub mod error;
pub mod fock;
pub mod schemes;
pub mod simulator;
pub mod source_stats;

pub use error::{Error, Result};
pub use fock::{FockState, ModeId, ModeRegistry, OccupationVector, Polarization};
