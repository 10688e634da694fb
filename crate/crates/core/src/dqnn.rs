//! The dissipative quantum neural network: layer architecture, perceptron
//! unitaries, layer-to-layer channel maps and forward propagation.
//!
//! A perceptron `U_j^l` is a unitary on all qubits of layer `l−1` plus the
//! single output qubit `j` of layer `l`. A layer map appends the next
//! layer's qubits in |0…0⟩, applies the layer's perceptrons with `U_1^l`
//! acting first, and traces out the previous layer.

use rand::Rng;

use crate::linalg::{embed, fidelity, haar_unitary, ComplexMatrix, QuantumState};
use crate::{Error, Result};

/// Layer widths m_0..m_{L+1} of a dissipative network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkArchitecture {
    layer_widths: Vec<usize>,
}

impl NetworkArchitecture {
    pub fn new(layer_widths: Vec<usize>) -> Result<Self> {
        if layer_widths.len() < 2 {
            return Err(Error::InvalidArchitecture(
                "need at least two layers".into(),
            ));
        }
        if layer_widths.contains(&0) {
            return Err(Error::InvalidArchitecture(
                "all layer widths must be at least 1".into(),
            ));
        }
        Ok(Self { layer_widths })
    }

    /// Parses strings like "1-1" or "2-3-2" into layer widths.
    pub fn parse(text: &str) -> Result<Self> {
        let widths = text
            .split('-')
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidArchitecture(format!("bad layer width {part:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(widths)
    }

    pub fn layer_widths(&self) -> &[usize] {
        &self.layer_widths
    }

    /// Number of qubit layers (L + 2 for L hidden layers).
    pub fn num_layers(&self) -> usize {
        self.layer_widths.len()
    }

    /// Number of perceptron layers (L + 1).
    pub fn num_perceptron_layers(&self) -> usize {
        self.layer_widths.len() - 1
    }

    /// Width m_l of qubit layer `l`, 0-based.
    pub fn width(&self, layer: usize) -> usize {
        self.layer_widths[layer]
    }

    pub fn input_width(&self) -> usize {
        self.layer_widths[0]
    }

    pub fn output_width(&self) -> usize {
        *self.layer_widths.last().unwrap()
    }

    /// Dimension 2^{m_{l−1}+1} of a perceptron in perceptron layer `l`
    /// (1-based).
    pub fn perceptron_dim(&self, layer: usize) -> usize {
        1usize << (self.width(layer - 1) + 1)
    }

    /// Total qubits across all layers.
    pub fn total_qubits(&self) -> usize {
        self.layer_widths.iter().sum()
    }
}

/// Ordered collection of perceptron unitaries U_j^l. `layers[l-1][j-1]`
/// holds U_j^l.
#[derive(Debug, Clone)]
pub struct PerceptronSet {
    arch: NetworkArchitecture,
    layers: Vec<Vec<ComplexMatrix>>,
}

/// Unitarity is rechecked at this tolerance whenever a perceptron is stored.
pub const PERCEPTRON_UNITARY_TOL: f64 = 1e-9;

impl PerceptronSet {
    /// Independent Haar-random unitaries of the correct dimensions.
    pub fn random(arch: &NetworkArchitecture, rng: &mut impl Rng) -> Self {
        let layers = (1..=arch.num_perceptron_layers())
            .map(|l| {
                (0..arch.width(l))
                    .map(|_| haar_unitary(arch.perceptron_dim(l), rng))
                    .collect()
            })
            .collect();
        Self {
            arch: arch.clone(),
            layers,
        }
    }

    /// All-identity perceptrons; the resulting network maps everything to
    /// |0…0⟩ on the output layer.
    pub fn identity(arch: &NetworkArchitecture) -> Self {
        let layers = (1..=arch.num_perceptron_layers())
            .map(|l| {
                (0..arch.width(l))
                    .map(|_| ComplexMatrix::identity(arch.perceptron_dim(l)))
                    .collect()
            })
            .collect();
        Self {
            arch: arch.clone(),
            layers,
        }
    }

    pub fn architecture(&self) -> &NetworkArchitecture {
        &self.arch
    }

    /// U_j^l for perceptron layer `l` and perceptron `j`, both 1-based.
    pub fn unitary(&self, l: usize, j: usize) -> &ComplexMatrix {
        &self.layers[l - 1][j - 1]
    }

    /// Replaces U_j^l, rechecking unitarity.
    pub fn set_unitary(&mut self, l: usize, j: usize, u: ComplexMatrix) -> Result<()> {
        let dim = self.arch.perceptron_dim(l);
        if !u.is_square() || u.rows() != dim {
            return Err(Error::DimensionMismatch(format!(
                "perceptron U_{j}^{l} must be {dim}x{dim}, got {}x{}",
                u.rows(),
                u.cols()
            )));
        }
        let deviation = u.unitarity_deviation();
        if deviation > PERCEPTRON_UNITARY_TOL {
            return Err(Error::NotUnitary {
                deviation,
                tolerance: PERCEPTRON_UNITARY_TOL,
            });
        }
        self.layers[l - 1][j - 1] = u;
        Ok(())
    }

    /// Largest unitarity deviation over all stored perceptrons.
    pub fn max_unitarity_deviation(&self) -> f64 {
        self.layers
            .iter()
            .flatten()
            .map(|u| u.unitarity_deviation())
            .fold(0.0, f64::max)
    }
}

/// The transition map E^l: appends |0…0⟩ on layer `l`'s qubits, applies
/// U^l_{m_l}…U^l_1 (U_1 acting first), and traces out layer `l−1`.
/// `layer` is 1-based.
pub fn layer_map(
    state: &QuantumState,
    layer: usize,
    perceptrons: &PerceptronSet,
) -> Result<QuantumState> {
    let arch = perceptrons.architecture();
    let m_prev = arch.width(layer - 1);
    let m_out = arch.width(layer);
    if state.num_qubits() != m_prev {
        return Err(Error::DimensionMismatch(format!(
            "layer {layer} expects a {m_prev}-qubit input, got {} qubits",
            state.num_qubits()
        )));
    }
    let total = m_prev + m_out;
    let joint = state.tensor(&QuantumState::zero_state(m_out));

    let mut layer_unitary = ComplexMatrix::identity(1 << total);
    for j in 1..=m_out {
        let mut acting_on: Vec<usize> = (0..m_prev).collect();
        acting_on.push(m_prev + j - 1);
        let embedded = embed(perceptrons.unitary(layer, j), &acting_on, total)?;
        // U^l = U_{m_l} … U_1, built up left-multiplying in ascending j.
        layer_unitary = &embedded * &layer_unitary;
    }

    let rho = layer_unitary.conjugate(&joint.density());
    let keep: Vec<usize> = (m_prev..total).collect();
    QuantumState::mixed_unchecked(total, rho).partial_trace(&keep)
}

/// Full forward propagation: the composition of all layer maps.
pub fn forward(rho_in: &QuantumState, perceptrons: &PerceptronSet) -> Result<QuantumState> {
    let arch = perceptrons.architecture();
    if rho_in.num_qubits() != arch.input_width() {
        return Err(Error::DimensionMismatch(format!(
            "network expects a {}-qubit input, got {}",
            arch.input_width(),
            rho_in.num_qubits()
        )));
    }
    let mut state = rho_in.clone();
    for l in 1..=arch.num_perceptron_layers() {
        state = layer_map(&state, l, perceptrons)?;
    }
    Ok(state)
}

/// Mean fidelity of forward outputs against pure targets.
pub fn supervised_loss(
    pairs: &[(QuantumState, QuantumState)],
    perceptrons: &PerceptronSet,
) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::EmptyBatch("supervised loss needs pairs".into()));
    }
    let mut acc = 0.0;
    for (input, target) in pairs {
        let output = forward(input, perceptrons)?;
        acc += fidelity(target, &output)?;
    }
    Ok(acc / pairs.len() as f64)
}
