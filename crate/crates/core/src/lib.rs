//! Exact simulation of linear-optical quantum computing.
//!
//! Photons live in [`fock`] states and evolve through [`interferometer`]
//! networks via matrix permanents. [`detection`] adds photon counting and
//! heralding, [`encoding`] maps qubits onto dual-rail mode pairs, and
//! [`gates`] builds the heralded nonlinear-sign and CNOT gates on top. The
//! qubit-level [`teleport`] and [`cluster`] modules cover gate teleportation
//! and measurement-based computation.

pub mod cluster;
pub mod detection;
pub mod encoding;
pub mod error;
pub mod fock;
pub mod gates;
pub mod interferometer;
pub mod logical;
pub mod rng;
pub mod teleport;

pub use error::{Error, Result};
pub use num_complex::Complex64;
