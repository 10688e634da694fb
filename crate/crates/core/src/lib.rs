//! Density-matrix simulation of dissipative quantum neural networks (DQNNs)
//! and their adversarial composition (DQGANs).
//!
//! The crate is split into five layers:
//!
//! * [`linalg`] — dense complex matrices, partial traces, embeddings,
//!   Hermitian matrix exponentials and Haar sampling for few-qubit systems.
//! * [`dqnn`] — the dissipative network abstraction: perceptron unitaries,
//!   layer-to-layer channel maps and forward propagation.
//! * [`dqgan`] — adversarial composition of two DQNNs, the exact
//!   unitary-update training rule and the training loop.
//! * [`pqc`] — the parameterised-quantum-circuit realisation (CAN and u
//!   gates) trained with finite-difference gradient ascent.
//! * [`datasets`] — generators for the line and cluster state families.

pub mod datasets;
pub mod dqgan;
pub mod dqnn;
mod error;
pub mod linalg;
pub mod pqc;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
