//! Dense complex linear algebra for few-qubit systems.
//!
//! Everything here is dense: the systems simulated by this crate stay below
//! ten qubits, where dense storage and O(n³) algorithms are both simpler and
//! fast enough. Qubit index 0 is the leftmost (most significant) tensor
//! factor throughout the crate.

mod eigen;
mod matrix;
mod random;
mod state;

pub use eigen::{hermitian_eigen, min_eigenvalue};
pub use matrix::{embed, exp_i_hermitian, ComplexMatrix, C64};
pub use random::{haar_unitary, random_pure_state};
pub use state::{fidelity, partial_trace_op, QuantumState, StateRepr};

/// Tolerance for algebraic identities (unitarity, hermiticity, traces).
pub const ALGEBRAIC_TOL: f64 = 1e-10;
/// Tolerance for positive-semidefiniteness checks; eigenvalue jitter from
/// double-precision eigendecomposition sits below this.
pub const PSD_TOL: f64 = 1e-9;
