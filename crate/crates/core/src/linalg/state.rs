use super::{min_eigenvalue, ComplexMatrix, ALGEBRAIC_TOL, C64, PSD_TOL};
use crate::{Error, Result};

/// Representation of a quantum state: a pure state vector or a density matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum StateRepr {
    Pure(Vec<C64>),
    Mixed(ComplexMatrix),
}

/// A quantum state over a register of qubits. Qubit 0 is the leftmost (most
/// significant) tensor factor.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    num_qubits: usize,
    repr: StateRepr,
}

impl QuantumState {
    /// Pure state from amplitudes; requires unit norm within 1e-10.
    pub fn pure(num_qubits: usize, amplitudes: Vec<C64>) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for {} qubits (expected {})",
                amplitudes.len(),
                num_qubits,
                dim
            )));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > ALGEBRAIC_TOL {
            return Err(Error::InvalidState(format!(
                "pure state norm {norm} deviates from 1"
            )));
        }
        Ok(Self::pure_unchecked(num_qubits, amplitudes))
    }

    pub(crate) fn pure_unchecked(num_qubits: usize, amplitudes: Vec<C64>) -> Self {
        Self {
            num_qubits,
            repr: StateRepr::Pure(amplitudes),
        }
    }

    /// Normalises the given amplitudes into a pure state.
    pub fn pure_normalised(num_qubits: usize, amplitudes: Vec<C64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let scaled = amplitudes.into_iter().map(|a| a / norm).collect();
        Self::pure(num_qubits, scaled)
    }

    /// Computational basis state |index⟩.
    pub fn basis_state(num_qubits: usize, index: usize) -> Self {
        let dim = 1usize << num_qubits;
        assert!(index < dim, "basis index out of range");
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Self::pure_unchecked(num_qubits, amplitudes)
    }

    /// |0…0⟩ on `num_qubits` qubits.
    pub fn zero_state(num_qubits: usize) -> Self {
        Self::basis_state(num_qubits, 0)
    }

    /// Mixed state from a density matrix; checked for hermiticity, unit trace
    /// and positivity within the crate tolerances.
    pub fn mixed(num_qubits: usize, rho: ComplexMatrix) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if !rho.is_square() || rho.rows() != dim {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} density matrix for {} qubits",
                rho.rows(),
                rho.cols(),
                num_qubits
            )));
        }
        let herm = rho.hermiticity_deviation();
        if herm > ALGEBRAIC_TOL {
            return Err(Error::NotHermitian {
                deviation: herm,
                tolerance: ALGEBRAIC_TOL,
            });
        }
        let trace = rho.trace();
        if (trace.re - 1.0).abs() > ALGEBRAIC_TOL || trace.im.abs() > ALGEBRAIC_TOL {
            return Err(Error::InvalidState(format!(
                "density matrix trace {trace} deviates from 1"
            )));
        }
        if min_eigenvalue(&rho) < -PSD_TOL {
            return Err(Error::InvalidState(
                "density matrix has a negative eigenvalue".into(),
            ));
        }
        Ok(Self::mixed_unchecked(num_qubits, rho))
    }

    /// Mixed state without validity checks, for internal channel code that
    /// produces valid density matrices by construction.
    pub(crate) fn mixed_unchecked(num_qubits: usize, rho: ComplexMatrix) -> Self {
        Self {
            num_qubits,
            repr: StateRepr::Mixed(rho),
        }
    }

    /// Maximally mixed state I/2ⁿ.
    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        let rho = ComplexMatrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0));
        Self::mixed_unchecked(num_qubits, rho)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1usize << self.num_qubits
    }

    pub fn repr(&self) -> &StateRepr {
        &self.repr
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.repr, StateRepr::Pure(_))
    }

    /// Amplitudes, if the state is stored as a pure vector.
    pub fn amplitudes(&self) -> Option<&[C64]> {
        match &self.repr {
            StateRepr::Pure(v) => Some(v),
            StateRepr::Mixed(_) => None,
        }
    }

    /// Density-matrix form, promoting pure states to |ψ⟩⟨ψ|.
    pub fn density(&self) -> ComplexMatrix {
        match &self.repr {
            StateRepr::Pure(v) => {
                let dim = v.len();
                let mut rho = ComplexMatrix::zeros(dim, dim);
                for i in 0..dim {
                    for j in 0..dim {
                        rho[(i, j)] = v[i] * v[j].conj();
                    }
                }
                rho
            }
            StateRepr::Mixed(rho) => rho.clone(),
        }
    }

    /// Tensor product with `self`'s qubits leading.
    pub fn tensor(&self, other: &Self) -> Self {
        match (&self.repr, &other.repr) {
            (StateRepr::Pure(a), StateRepr::Pure(b)) => {
                let mut amplitudes = Vec::with_capacity(a.len() * b.len());
                for &x in a {
                    for &y in b {
                        amplitudes.push(x * y);
                    }
                }
                Self::pure_unchecked(self.num_qubits + other.num_qubits, amplitudes)
            }
            _ => Self::mixed_unchecked(
                self.num_qubits + other.num_qubits,
                self.density().kron(&other.density()),
            ),
        }
    }

    /// Traces out every qubit not listed in `keep`. The result's k-th qubit
    /// is the register qubit `keep[k]`, so permuted keep lists reorder the
    /// output register. Pure inputs are promoted to mixed first.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<QuantumState> {
        let out = partial_trace_op(&self.density(), self.num_qubits, keep)?;
        Ok(QuantumState::mixed_unchecked(keep.len(), out))
    }
}

/// Partial trace of an arbitrary operator on `num_qubits` qubits onto the
/// `keep` qubits; the result's k-th qubit is `keep[k]`.
pub fn partial_trace_op(
    op: &ComplexMatrix,
    num_qubits: usize,
    keep: &[usize],
) -> Result<ComplexMatrix> {
    let n = num_qubits;
    assert!(op.is_square() && op.rows() == 1usize << n);
    for (idx, &q) in keep.iter().enumerate() {
        if q >= n {
            return Err(Error::QubitOutOfRange {
                index: q,
                num_qubits: n,
            });
        }
        if keep[..idx].contains(&q) {
            return Err(Error::DuplicateQubit(q));
        }
    }
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let k = keep.len();
    let t = traced.len();
    let out_dim = 1usize << k;

    // Position of qubit q's bit within a full basis index.
    let shift = |q: usize| n - 1 - q;
    let compose = |sub: usize, env: usize| -> usize {
        let mut full = 0usize;
        for (pos, &q) in keep.iter().enumerate() {
            full |= ((sub >> (k - 1 - pos)) & 1) << shift(q);
        }
        for (pos, &q) in traced.iter().enumerate() {
            full |= ((env >> (t - 1 - pos)) & 1) << shift(q);
        }
        full
    };

    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for i in 0..out_dim {
        for j in 0..out_dim {
            let mut acc = C64::new(0.0, 0.0);
            for env in 0..(1usize << t) {
                acc += op[(compose(i, env), compose(j, env))];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// ⟨φ|ρ|φ⟩ for a pure target and an arbitrary state, clamped to [0, 1].
pub fn fidelity(target: &QuantumState, rho: &QuantumState) -> Result<f64> {
    let phi = target
        .amplitudes()
        .ok_or_else(|| Error::InvalidState("fidelity target must be pure".into()))?;
    if target.num_qubits() != rho.num_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "fidelity of {}-qubit target against {}-qubit state",
            target.num_qubits(),
            rho.num_qubits()
        )));
    }
    let value = match rho.repr() {
        StateRepr::Pure(psi) => {
            let overlap: C64 = phi.iter().zip(psi.iter()).map(|(a, b)| a.conj() * b).sum();
            overlap.norm_sqr()
        }
        StateRepr::Mixed(m) => {
            let m_phi = m.mul_vec(phi);
            let value: C64 = phi
                .iter()
                .zip(m_phi.iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            debug_assert!(value.im.abs() < 1e-10, "fidelity imaginary residue");
            value.re
        }
    };
    Ok(value.clamp(0.0, 1.0))
}
