//! Virtual qubits in the correlation space of entangled multi-qubit systems.
//!
//! A register of N physical qubits in a pure state delocalizes locally written
//! information: after a phase write on the first qubit the reduced state of
//! that qubit is typically unchanged, yet the written parameter is recoverable
//! from the system as a whole. This crate locates single *virtual* qubits —
//! operator triples in correlation space — that confine such a write
//! perfectly, so a single swap with one external qubit retrieves everything.
//!
//! The main entry points are:
//!
//! * [`qubit::StateVector`] — dense N-qubit pure states with first-qubit
//!   Schmidt decomposition,
//! * [`corr::VirtualQubit`] — verified operator triples and their
//!   correlation-space states,
//! * [`qic::find_qic`] — the capsule construction for an arbitrary state,
//! * [`info::extract`] — swap-based readout with Fisher-information audit,
//! * [`dynamics`] — Hamiltonian evolution and operator-spreading tracking.

pub mod config;
pub mod corr;
pub mod dynamics;
pub mod error;
pub mod info;
pub mod io;
pub mod linalg;
pub mod pauli;
pub mod qic;
pub mod qubit;

pub use config::{Limits, Tolerances};
pub use error::{Error, Result};
pub use linalg::{CMat, CVec};
