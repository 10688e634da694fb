use rand::Rng;
use rand_distr::StandardNormal;

use super::{ComplexMatrix, QuantumState, C64};

fn standard_complex(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Haar-distributed pure state on `num_qubits` qubits: independent standard
/// complex Gaussian amplitudes, normalised.
pub fn random_pure_state(num_qubits: usize, rng: &mut impl Rng) -> QuantumState {
    assert!(num_qubits >= 1, "need at least one qubit");
    let dim = 1usize << num_qubits;
    let mut amplitudes: Vec<C64> = (0..dim).map(|_| standard_complex(rng)).collect();
    let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amplitudes {
        *a /= norm;
    }
    QuantumState::pure_unchecked(num_qubits, amplitudes)
}

/// Haar-distributed unitary of the given dimension: QR decomposition of a
/// complex Gaussian matrix with the R diagonal phase-fixed to be positive.
///
/// Modified Gram–Schmidt produces exactly that phase convention, so the Q
/// factor is used directly.
pub fn haar_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    assert!(dim >= 1);
    let mut columns: Vec<Vec<C64>> = (0..dim)
        .map(|_| (0..dim).map(|_| standard_complex(rng)).collect())
        .collect();

    for j in 0..dim {
        for i in 0..j {
            let (head, tail) = columns.split_at_mut(j);
            let qi = &head[i];
            let vj = &mut tail[0];
            let overlap: C64 = qi.iter().zip(vj.iter()).map(|(q, v)| q.conj() * v).sum();
            for (v, q) in vj.iter_mut().zip(qi.iter()) {
                *v -= overlap * q;
            }
        }
        let norm: f64 = columns[j].iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for v in &mut columns[j] {
            *v /= norm;
        }
    }

    let mut u = ComplexMatrix::zeros(dim, dim);
    for (j, col) in columns.iter().enumerate() {
        for (i, &value) in col.iter().enumerate() {
            u[(i, j)] = value;
        }
    }
    u
}
