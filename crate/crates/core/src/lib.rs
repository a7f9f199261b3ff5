//! Open antiferromagnetic spin-1/2 Heisenberg chains with weakly coupled
//! end probes, evaluated as quantum channels.
//!
//! The chain is diagonalized exactly in fixed-magnetization sectors. The
//! singlet ground state and lowest triplet give the thermal two-probe
//! Werner state, which fixes the teleportation fidelity. State transfer is
//! evaluated both with the effective three-spin closed forms and by direct
//! Krylov propagation of the full chain.

pub mod cli;
pub mod eigen;
pub mod entangle;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod scaling;
pub mod spin;
pub mod teleport;
pub mod thermal;
pub mod transfer;

pub use error::{Error, Result};
