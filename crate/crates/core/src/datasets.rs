//! Training-set generators: the Bloch-sphere line sets, the two-cluster
//! sets, and the training/validation split policies.

use std::io::Write;

use rand::Rng;

use crate::linalg::{QuantumState, C64};
use crate::{Error, Result};

/// An ordered list of pure states of uniform width.
#[derive(Debug, Clone)]
pub struct StateDataset {
    name: String,
    num_qubits: usize,
    states: Vec<QuantumState>,
}

impl StateDataset {
    fn new(name: &str, num_qubits: usize, states: Vec<QuantumState>) -> Self {
        debug_assert!(states.iter().all(|s| s.num_qubits() == num_qubits));
        Self {
            name: name.to_string(),
            num_qubits,
            states,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[QuantumState] {
        &self.states
    }

    pub fn state(&self, index: usize) -> &QuantumState {
        &self.states[index]
    }

    /// CSV rows of `index,re_0,im_0,…` for each amplitude.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        let dim = 1usize << self.num_qubits;
        write!(out, "index")?;
        for a in 0..dim {
            write!(out, ",re_{a},im_{a}")?;
        }
        writeln!(out)?;
        for (i, state) in self.states.iter().enumerate() {
            write!(out, "{}", i + 1)?;
            let amplitudes = state.amplitudes().expect("dataset states are pure");
            for a in amplitudes {
                write!(out, ",{:.17e},{:.17e}", a.re, a.im)?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

fn superposition(num_qubits: usize, low: usize, high: usize, a: f64, b: f64) -> QuantumState {
    let dim = 1usize << num_qubits;
    let norm = (a * a + b * b).sqrt();
    let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
    amplitudes[low] = C64::new(a / norm, 0.0);
    amplitudes[high] = C64::new(b / norm, 0.0);
    QuantumState::pure(num_qubits, amplitudes).expect("normalised by construction")
}

/// Line on the Bloch sphere: ((N−x)|0⟩ + (x−1)|1⟩)/‖·‖ for x = 1..N.
pub fn data_line(n: usize) -> Result<StateDataset> {
    if n < 2 {
        return Err(Error::InvalidDataset(format!("data_line needs N >= 2, got {n}")));
    }
    let states = (1..=n)
        .map(|x| superposition(1, 0, 1, (n - x) as f64, (x - 1) as f64))
        .collect();
    Ok(StateDataset::new("data_line", 1, states))
}

/// Three-qubit line: ((N−x)|000⟩ + (x−1)|001⟩)/‖·‖ for x = 1..N.
pub fn data_line_prime(n: usize) -> Result<StateDataset> {
    if n < 2 {
        return Err(Error::InvalidDataset(format!(
            "data_line_prime needs N >= 2, got {n}"
        )));
    }
    let states = (1..=n)
        .map(|x| superposition(3, 0, 1, (n - x) as f64, (x - 1) as f64))
        .collect();
    Ok(StateDataset::new("data_line_prime", 3, states))
}

fn check_cluster_n(name: &str, n: usize) -> Result<()> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::InvalidDataset(format!(
            "{name} needs even N >= 4, got {n}"
        )));
    }
    Ok(())
}

/// The x indices of the two clusters: 1..N/2 and 3N/2..2N, both inclusive.
fn cluster_indices(n: usize) -> impl Iterator<Item = usize> {
    (1..=n / 2).chain(3 * n / 2..=2 * n)
}

/// Two clusters, as printed: ((2N−1)|0⟩ + (x−1)|1⟩)/‖·‖ over both index
/// ranges. Size N+1.
pub fn data_cl(n: usize) -> Result<StateDataset> {
    check_cluster_n("data_cl", n)?;
    let a = (2 * n - 1) as f64;
    let states = cluster_indices(n)
        .map(|x| superposition(1, 0, 1, a, (x - 1) as f64))
        .collect();
    Ok(StateDataset::new("data_cl", 1, states))
}

/// Symmetrised variant: the second cluster mirrors the first about the
/// equator, ((x−1)|0⟩ + (2N−1)|1⟩)/‖·‖.
pub fn data_cl_sym(n: usize) -> Result<StateDataset> {
    check_cluster_n("data_cl_sym", n)?;
    let a = (2 * n - 1) as f64;
    let states = cluster_indices(n)
        .map(|x| {
            if x <= n / 2 {
                superposition(1, 0, 1, a, (x - 1) as f64)
            } else {
                superposition(1, 0, 1, (x - 1) as f64, a)
            }
        })
        .collect();
    Ok(StateDataset::new("data_cl_sym", 1, states))
}

/// data_cl with its middle element replaced by (|0⟩ + |1⟩)/√2.
pub fn data_cl_plus(n: usize) -> Result<StateDataset> {
    let mut set = data_cl(n)?;
    let mid = set.len() / 2;
    set.states[mid] = superposition(1, 0, 1, 1.0, 1.0);
    set.name = "data_cl_plus".to_string();
    Ok(set)
}

/// How training indices are drawn from a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionPolicy {
    /// Uniform shuffle, first S indices.
    Random,
    /// round(k·(N−1)/(S−1)) for k = 0..S−1, deduplicated.
    EquallySpaced,
}

/// Splits dataset indices into (training, validation). Training indices keep
/// selection order; validation indices are the remainder in ascending order.
pub fn select_training(
    dataset: &StateDataset,
    s: usize,
    policy: SelectionPolicy,
    rng: &mut impl Rng,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = dataset.len();
    if s == 0 || s > n {
        return Err(Error::BatchTooLarge {
            requested: s,
            available: n,
        });
    }
    let training: Vec<usize> = match policy {
        SelectionPolicy::Random => {
            let mut indices: Vec<usize> = (0..n).collect();
            for i in 0..s {
                let pick = rng.gen_range(i..n);
                indices.swap(i, pick);
            }
            indices.truncate(s);
            indices
        }
        SelectionPolicy::EquallySpaced => {
            let mut picked = Vec::with_capacity(s);
            if s == 1 {
                picked.push(0);
            } else {
                for k in 0..s {
                    let idx =
                        ((k * (n - 1)) as f64 / (s - 1) as f64).round() as usize;
                    if picked.last() != Some(&idx) {
                        picked.push(idx);
                    }
                }
            }
            picked
        }
    };
    let validation: Vec<usize> = (0..n).filter(|i| !training.contains(i)).collect();
    Ok((training, validation))
}
