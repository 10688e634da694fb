//! Adversarial composition of two dissipative networks: the discriminator
//! and generator losses, the exact Hermitian update matrices, and the
//! alternating training loop.
//!
//! The update matrices come from a first-order expansion of the losses under
//! U ← exp(iεK)U together with a Lagrange constraint on the coefficient
//! norm, which makes each K proportional to the partial trace of a
//! commutator between the propagated state and the back-propagated
//! projector. The prefactor η·2^{m_{l−1}}/(2S) follows the full derivation
//! (the factor-2 variant is absorbable into η).

use rand::Rng;

use crate::dqnn::{forward, layer_map, NetworkArchitecture, PerceptronSet};
use crate::linalg::{
    embed, exp_i_hermitian, fidelity, partial_trace_op, random_pure_state, ComplexMatrix,
    QuantumState, C64,
};
use crate::{Error, Result};

/// Which data path feeds the discriminator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Generator output on a random input state.
    Generated,
    /// A training state fed to the discriminator directly.
    Training,
}

/// The two adversarially trained halves of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubNetwork {
    Generator,
    Discriminator,
}

/// A generator and a discriminator DQNN joined at a shared qubit layer.
#[derive(Debug, Clone)]
pub struct DqganModel {
    generator_arch: NetworkArchitecture,
    discriminator_arch: NetworkArchitecture,
    /// Perceptrons over the concatenated layer list.
    perceptrons: PerceptronSet,
    /// Index of the last generator perceptron layer.
    g: usize,
}

impl DqganModel {
    /// Combines the two layer lists, sharing the seam layer.
    pub fn combined_architecture(
        generator: &NetworkArchitecture,
        discriminator: &NetworkArchitecture,
    ) -> Result<NetworkArchitecture> {
        if generator.output_width() != discriminator.input_width() {
            return Err(Error::InvalidArchitecture(format!(
                "generator output width {} does not match discriminator input width {}",
                generator.output_width(),
                discriminator.input_width()
            )));
        }
        if discriminator.output_width() != 1 {
            return Err(Error::InvalidArchitecture(format!(
                "discriminator output layer must be one qubit wide, got {}",
                discriminator.output_width()
            )));
        }
        let mut widths = generator.layer_widths().to_vec();
        widths.extend_from_slice(&discriminator.layer_widths()[1..]);
        NetworkArchitecture::new(widths)
    }

    pub fn new(
        generator_arch: NetworkArchitecture,
        discriminator_arch: NetworkArchitecture,
        perceptrons: PerceptronSet,
    ) -> Result<Self> {
        let combined = Self::combined_architecture(&generator_arch, &discriminator_arch)?;
        if perceptrons.architecture() != &combined {
            return Err(Error::InvalidArchitecture(
                "perceptron set does not match the combined architecture".into(),
            ));
        }
        let g = generator_arch.num_perceptron_layers();
        Ok(Self {
            generator_arch,
            discriminator_arch,
            perceptrons,
            g,
        })
    }

    /// Haar-random initialization of all perceptrons.
    pub fn random(
        generator_arch: NetworkArchitecture,
        discriminator_arch: NetworkArchitecture,
        rng: &mut impl Rng,
    ) -> Result<Self> {
        let combined = Self::combined_architecture(&generator_arch, &discriminator_arch)?;
        let perceptrons = PerceptronSet::random(&combined, rng);
        Self::new(generator_arch, discriminator_arch, perceptrons)
    }

    /// All-identity perceptrons; useful as a fixed point in tests.
    pub fn identity(
        generator_arch: NetworkArchitecture,
        discriminator_arch: NetworkArchitecture,
    ) -> Result<Self> {
        let combined = Self::combined_architecture(&generator_arch, &discriminator_arch)?;
        let perceptrons = PerceptronSet::identity(&combined);
        Self::new(generator_arch, discriminator_arch, perceptrons)
    }

    pub fn generator_arch(&self) -> &NetworkArchitecture {
        &self.generator_arch
    }

    pub fn discriminator_arch(&self) -> &NetworkArchitecture {
        &self.discriminator_arch
    }

    pub fn combined_arch(&self) -> &NetworkArchitecture {
        self.perceptrons.architecture()
    }

    pub fn perceptrons(&self) -> &PerceptronSet {
        &self.perceptrons
    }

    pub fn perceptrons_mut(&mut self) -> &mut PerceptronSet {
        &mut self.perceptrons
    }

    /// Index of the last generator perceptron layer.
    pub fn g(&self) -> usize {
        self.g
    }

    /// ℰ_G applied to a generator input state.
    pub fn generator_output(&self, input: &QuantumState) -> Result<QuantumState> {
        if input.num_qubits() != self.generator_arch.input_width() {
            return Err(Error::DimensionMismatch(format!(
                "generator expects {} input qubits, got {}",
                self.generator_arch.input_width(),
                input.num_qubits()
            )));
        }
        let mut state = input.clone();
        for l in 1..=self.g {
            state = layer_map(&state, l, &self.perceptrons)?;
        }
        Ok(state)
    }

    /// The discriminator's one-qubit output for either branch.
    pub fn discriminator_output(
        &self,
        input: &QuantumState,
        branch: Branch,
    ) -> Result<QuantumState> {
        match branch {
            Branch::Generated => forward(input, &self.perceptrons),
            Branch::Training => {
                if input.num_qubits() != self.discriminator_arch.input_width() {
                    return Err(Error::DimensionMismatch(format!(
                        "discriminator expects {} input qubits, got {}",
                        self.discriminator_arch.input_width(),
                        input.num_qubits()
                    )));
                }
                let total_layers = self.combined_arch().num_perceptron_layers();
                let mut state = input.clone();
                for l in (self.g + 1)..=total_layers {
                    state = layer_map(&state, l, &self.perceptrons)?;
                }
                Ok(state)
            }
        }
    }
}

/// Hyper-parameters of the exact training algorithm. The Lagrange
/// multiplier λ equals 1/η.
#[derive(Debug, Clone)]
pub struct TrainHyper {
    /// Epoch count.
    pub r_t: usize,
    /// Discriminator rounds per epoch.
    pub r_d: usize,
    /// Generator rounds per epoch.
    pub r_g: usize,
    /// Training batch size.
    pub s: usize,
    /// Validation sample count.
    pub v: usize,
    /// Learning rate η.
    pub eta: f64,
    /// Training step size ε.
    pub epsilon: f64,
}

impl TrainHyper {
    pub fn validate(&self) -> Result<()> {
        if self.eta <= 0.0 || self.epsilon <= 0.0 {
            return Err(Error::Other("eta and epsilon must be positive".into()));
        }
        if self.s == 0 || self.v == 0 {
            return Err(Error::Other("S and V must be at least 1".into()));
        }
        Ok(())
    }

    pub fn lambda(&self) -> f64 {
        1.0 / self.eta
    }
}

/// Per-epoch loss values; `t` = epoch × ε is the usual x-axis for loss plots.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingRecord {
    pub epoch: usize,
    pub t: f64,
    pub loss_d: f64,
    pub loss_g: f64,
    pub loss_v: f64,
}

/// One batch for update-matrix evaluation: random generator inputs plus the
/// matching training states (the latter only used by discriminator updates).
#[derive(Debug, Clone)]
pub struct UpdateBatch {
    pub inputs: Vec<QuantumState>,
    pub training: Vec<QuantumState>,
}

/// (layer, perceptron, K) triples for one sub-network.
pub type UpdateMatrices = Vec<(usize, usize, ComplexMatrix)>;

/// L_D: ⟨0|-projection of the generated branch plus ⟨1|-projection of the
/// training branch, both batch-averaged. In [0, 2].
pub fn loss_d(
    model: &DqganModel,
    inputs: &[QuantumState],
    training_batch: &[QuantumState],
) -> Result<f64> {
    if inputs.is_empty() || training_batch.is_empty() {
        return Err(Error::EmptyBatch("loss_D needs both batches".into()));
    }
    let zero = QuantumState::basis_state(1, 0);
    let one = QuantumState::basis_state(1, 1);
    let mut generated_term = 0.0;
    for psi in inputs {
        let out = model.discriminator_output(psi, Branch::Generated)?;
        generated_term += fidelity(&zero, &out)?;
    }
    let mut training_term = 0.0;
    for phi in training_batch {
        let out = model.discriminator_output(phi, Branch::Training)?;
        training_term += fidelity(&one, &out)?;
    }
    Ok(generated_term / inputs.len() as f64 + training_term / training_batch.len() as f64)
}

/// L_G: batch-averaged ⟨1|-projection of the generated branch. In [0, 1].
pub fn loss_g(model: &DqganModel, inputs: &[QuantumState]) -> Result<f64> {
    if inputs.is_empty() {
        return Err(Error::EmptyBatch("loss_G needs inputs".into()));
    }
    let one = QuantumState::basis_state(1, 1);
    let mut acc = 0.0;
    for psi in inputs {
        let out = model.discriminator_output(psi, Branch::Generated)?;
        acc += fidelity(&one, &out)?;
    }
    Ok(acc / inputs.len() as f64)
}

/// Qubit offset of each layer within the full register.
fn layer_offsets(arch: &NetworkArchitecture) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(arch.num_layers());
    let mut acc = 0;
    for &w in arch.layer_widths() {
        offsets.push(acc);
        acc += w;
    }
    offsets
}

/// Register qubits perceptron U_j^l acts on: all of layer l−1 followed by
/// output qubit j of layer l.
fn perceptron_qubits(arch: &NetworkArchitecture, offsets: &[usize], l: usize, j: usize) -> Vec<usize> {
    let mut qubits: Vec<usize> =
        (offsets[l - 1]..offsets[l - 1] + arch.width(l - 1)).collect();
    qubits.push(offsets[l] + j - 1);
    qubits
}

/// Perceptrons embedded into a register, in application order
/// (U_1^{first}, …, U_{m}^{last}).
struct EmbeddedChain {
    total_qubits: usize,
    labels: Vec<(usize, usize)>,
    ops: Vec<ComplexMatrix>,
}

impl EmbeddedChain {
    fn build(
        perceptrons: &PerceptronSet,
        first_layer: usize,
        last_layer: usize,
        qubit_base: usize,
        total_qubits: usize,
    ) -> Result<Self> {
        let arch = perceptrons.architecture();
        let offsets = layer_offsets(arch);
        let mut labels = Vec::new();
        let mut ops = Vec::new();
        for l in first_layer..=last_layer {
            for j in 1..=arch.width(l) {
                let qubits: Vec<usize> = perceptron_qubits(arch, &offsets, l, j)
                    .into_iter()
                    .map(|q| q - qubit_base)
                    .collect();
                ops.push(embed(perceptrons.unitary(l, j), &qubits, total_qubits)?);
                labels.push((l, j));
            }
        }
        Ok(Self {
            total_qubits,
            labels,
            ops,
        })
    }

    fn position(&self, l: usize, j: usize) -> Option<usize> {
        self.labels.iter().position(|&(a, b)| (a, b) == (l, j))
    }

    /// tr_rest([C ρ₀ C†, R† P R]) where C is the chain prefix through
    /// position `split−1` and R the remaining suffix.
    fn reduced_commutator(
        &self,
        split: usize,
        rho0: &ComplexMatrix,
        projector: &ComplexMatrix,
        keep: &[usize],
    ) -> Result<ComplexMatrix> {
        let mut rho = rho0.clone();
        for op in &self.ops[..split] {
            rho = op.conjugate(&rho);
        }
        let mut proj = projector.clone();
        for op in self.ops[split..].iter().rev() {
            proj = op.dagger().conjugate(&proj);
        }
        let commutator = &(&rho * &proj) - &(&proj * &rho);
        partial_trace_op(&commutator, self.total_qubits, keep)
    }
}

/// Projector 1 ⊗ |1⟩⟨1| on the last register qubit.
fn final_projector(total_qubits: usize) -> ComplexMatrix {
    let mut one = ComplexMatrix::zeros(2, 2);
    one[(1, 1)] = C64::new(1.0, 0.0);
    embed(&one, &[total_qubits - 1], total_qubits).expect("projector embedding")
}

/// The Hermitian update generator K_j^l for one perceptron.
///
/// For generator layers (l ≤ g) the commutator propagates random inputs
/// through the whole network against the |1⟩⟨1| projector; for discriminator
/// layers the training-branch term (on the discriminator register alone)
/// minus the generated-branch term is used.
pub fn update_matrix(
    model: &DqganModel,
    batch: &UpdateBatch,
    l: usize,
    j: usize,
    hyper: &TrainHyper,
) -> Result<ComplexMatrix> {
    let arch = model.combined_arch();
    let total_layers = arch.num_perceptron_layers();
    if l < 1 || l > total_layers || j < 1 || j > arch.width(l) {
        return Err(Error::QubitOutOfRange {
            index: j,
            num_qubits: arch.width(l.min(total_layers)),
        });
    }
    if batch.inputs.is_empty() {
        return Err(Error::EmptyBatch("update matrix needs inputs".into()));
    }
    let s = batch.inputs.len();
    let scale = hyper.eta * (1usize << arch.width(l - 1)) as f64 / (2.0 * s as f64);

    let offsets = layer_offsets(arch);
    let total = arch.total_qubits();
    let full = EmbeddedChain::build(model.perceptrons(), 1, total_layers, 0, total)?;
    let split_full = full.position(l, j).expect("perceptron in full chain") + 1;
    let keep_full = perceptron_qubits(arch, &offsets, l, j);
    let proj_full = final_projector(total);

    let dim = arch.perceptron_dim(l);
    let mut sum = ComplexMatrix::zeros(dim, dim);

    if l <= model.g() {
        for psi in &batch.inputs {
            let rho0 = psi
                .tensor(&QuantumState::zero_state(total - psi.num_qubits()))
                .density();
            let reduced = full.reduced_commutator(split_full, &rho0, &proj_full, &keep_full)?;
            sum = &sum + &reduced;
        }
    } else {
        if batch.training.len() != s {
            return Err(Error::EmptyBatch(
                "discriminator update needs one training state per input".into(),
            ));
        }
        // The training branch lives on the discriminator register alone.
        let dis_base = offsets[model.g()];
        let dis_total = total - dis_base;
        let dis =
            EmbeddedChain::build(model.perceptrons(), model.g() + 1, total_layers, dis_base, dis_total)?;
        let split_dis = dis.position(l, j).expect("perceptron in dis chain") + 1;
        let keep_dis: Vec<usize> = keep_full.iter().map(|q| q - dis_base).collect();
        let proj_dis = final_projector(dis_total);

        for (psi, phi) in batch.inputs.iter().zip(&batch.training) {
            let rho_train = phi
                .tensor(&QuantumState::zero_state(dis_total - phi.num_qubits()))
                .density();
            let reduced_train =
                dis.reduced_commutator(split_dis, &rho_train, &proj_dis, &keep_dis)?;

            let rho_gen = psi
                .tensor(&QuantumState::zero_state(total - psi.num_qubits()))
                .density();
            let reduced_gen =
                full.reduced_commutator(split_full, &rho_gen, &proj_full, &keep_full)?;

            sum = &sum + &(&reduced_train - &reduced_gen);
        }
    }

    let k = sum.scale(C64::new(0.0, scale));
    debug_assert!(k.hermiticity_deviation() < 1e-9);
    Ok(k)
}

/// Update matrices for every perceptron of the chosen sub-network.
pub fn compute_updates(
    model: &DqganModel,
    which: SubNetwork,
    batch: &UpdateBatch,
    hyper: &TrainHyper,
) -> Result<UpdateMatrices> {
    let arch = model.combined_arch();
    let layers: Vec<usize> = match which {
        SubNetwork::Generator => (1..=model.g()).collect(),
        SubNetwork::Discriminator => (model.g() + 1..=arch.num_perceptron_layers()).collect(),
    };
    let mut out = Vec::new();
    for l in layers {
        for j in 1..=arch.width(l) {
            out.push((l, j, update_matrix(model, batch, l, j, hyper)?));
        }
    }
    Ok(out)
}

/// Applies U ← exp(iεK)·U to every perceptron of the chosen sub-network.
/// The update set must cover exactly that sub-network.
pub fn apply_updates(
    model: &DqganModel,
    which: SubNetwork,
    updates: &UpdateMatrices,
    epsilon: f64,
) -> Result<DqganModel> {
    let arch = model.combined_arch();
    let expected: Vec<(usize, usize)> = match which {
        SubNetwork::Generator => (1..=model.g())
            .flat_map(|l| (1..=arch.width(l)).map(move |j| (l, j)))
            .collect(),
        SubNetwork::Discriminator => (model.g() + 1..=arch.num_perceptron_layers())
            .flat_map(|l| (1..=arch.width(l)).map(move |j| (l, j)))
            .collect(),
    };
    let mut provided: Vec<(usize, usize)> = updates.iter().map(|&(l, j, _)| (l, j)).collect();
    provided.sort_unstable();
    let mut wanted = expected.clone();
    wanted.sort_unstable();
    if provided != wanted {
        return Err(Error::Other(format!(
            "update set covers {provided:?}, expected {wanted:?}"
        )));
    }

    let mut next = model.clone();
    for (l, j, k) in updates {
        let rotation = exp_i_hermitian(k, epsilon)?;
        let updated = &rotation * next.perceptrons().unitary(*l, *j);
        next.perceptrons_mut().set_unitary(*l, *j, updated)?;
    }
    Ok(next)
}

/// Predicted first-order change per unit ε of the relevant loss when every
/// perceptron in `updates` steps by exp(iεK): Σ 2·tr(K²)/(η·2^{m_{l−1}}).
///
/// Follows from δ(trace term) = iε·tr(K̂·[σ, P]) per sample and K being
/// proportional to the reduced commutator; tr(K²) ≥ 0 makes every exact
/// update step an ascent direction at first order.
pub fn first_order_slope(
    model: &DqganModel,
    updates: &UpdateMatrices,
    hyper: &TrainHyper,
) -> f64 {
    let arch = model.combined_arch();
    updates
        .iter()
        .map(|(l, _, k)| {
            let tr_k2 = (k * k).trace().re;
            2.0 * tr_k2 / (hyper.eta * (1usize << arch.width(l - 1)) as f64)
        })
        .sum()
}

/// Mean over generated samples of the best fidelity to any dataset element,
/// with the generator given as a closure.
pub fn validation_loss_with(
    mut generator: impl FnMut(&QuantumState) -> Result<QuantumState>,
    validation_inputs: &[QuantumState],
    full_dataset: &[QuantumState],
) -> Result<f64> {
    if validation_inputs.is_empty() || full_dataset.is_empty() {
        return Err(Error::EmptyBatch("validation loss needs states".into()));
    }
    let mut acc = 0.0;
    for psi in validation_inputs {
        let produced = generator(psi)?;
        let mut best = 0.0f64;
        for target in full_dataset {
            best = best.max(fidelity(target, &produced)?);
        }
        acc += best;
    }
    Ok(acc / validation_inputs.len() as f64)
}

/// L_V for an exact-mode model.
pub fn validation_loss(
    model: &DqganModel,
    validation_inputs: &[QuantumState],
    full_dataset: &[QuantumState],
) -> Result<f64> {
    validation_loss_with(
        |psi| model.generator_output(psi),
        validation_inputs,
        full_dataset,
    )
}

/// Per-dataset-index counts of nearest-by-fidelity assignments, with
/// training/validation membership recorded per index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiversityHistogram {
    counts: Vec<usize>,
    training_membership: Vec<bool>,
}

impl DiversityHistogram {
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn is_training(&self, index: usize) -> bool {
        self.training_membership[index]
    }

    /// Counts masked to training-member indices (zero elsewhere).
    pub fn training_counts(&self) -> Vec<usize> {
        self.counts
            .iter()
            .zip(&self.training_membership)
            .map(|(&c, &m)| if m { c } else { 0 })
            .collect()
    }

    /// Counts masked to validation-member indices (zero elsewhere).
    pub fn validation_counts(&self) -> Vec<usize> {
        self.counts
            .iter()
            .zip(&self.training_membership)
            .map(|(&c, &m)| if m { 0 } else { c })
            .collect()
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Fraction of dataset indices that received at least one count.
    pub fn coverage(&self) -> f64 {
        let nonzero = self.counts.iter().filter(|&&c| c > 0).count();
        nonzero as f64 / self.counts.len() as f64
    }
}

/// Diversity histogram with the generator given as a closure. Ties in the
/// fidelity argmax break toward the lowest index.
pub fn diversity_histogram_with(
    mut generator: impl FnMut(&QuantumState) -> Result<QuantumState>,
    input_qubits: usize,
    sample_count: usize,
    full_dataset: &[QuantumState],
    training_indices: &[usize],
    rng: &mut impl Rng,
) -> Result<DiversityHistogram> {
    if sample_count == 0 {
        return Err(Error::EmptyBatch("histogram needs samples".into()));
    }
    let mut counts = vec![0usize; full_dataset.len()];
    for _ in 0..sample_count {
        let input = random_pure_state(input_qubits, rng);
        let produced = generator(&input)?;
        let mut best_index = 0;
        let mut best_value = f64::NEG_INFINITY;
        for (idx, target) in full_dataset.iter().enumerate() {
            let f = fidelity(target, &produced)?;
            if f > best_value {
                best_value = f;
                best_index = idx;
            }
        }
        counts[best_index] += 1;
    }
    let training_membership = (0..full_dataset.len())
        .map(|i| training_indices.contains(&i))
        .collect();
    Ok(DiversityHistogram {
        counts,
        training_membership,
    })
}

/// Diversity histogram for an exact-mode model.
pub fn diversity_histogram(
    model: &DqganModel,
    sample_count: usize,
    full_dataset: &[QuantumState],
    training_indices: &[usize],
    rng: &mut impl Rng,
) -> Result<DiversityHistogram> {
    diversity_histogram_with(
        |psi| model.generator_output(psi),
        model.generator_arch().input_width(),
        sample_count,
        full_dataset,
        training_indices,
        rng,
    )
}

/// Draws `count` distinct indices from 0..n by partial Fisher–Yates.
pub fn sample_without_replacement(n: usize, count: usize, rng: &mut impl Rng) -> Vec<usize> {
    assert!(count <= n);
    let mut indices: Vec<usize> = (0..n).collect();
    for i in 0..count {
        let pick = rng.gen_range(i..n);
        indices.swap(i, pick);
    }
    indices.truncate(count);
    indices
}

/// The alternating training loop.
///
/// Per epoch: draw S training states from the pool without replacement, run
/// r_D discriminator rounds (fresh random inputs each) followed by r_G
/// generator rounds, then record L_D and L_G on the epoch's training batch
/// plus a fresh random-input batch, and L_V on V fresh inputs against the
/// full dataset. `epoch_hook` runs after each epoch's recording.
pub fn train(
    model: &DqganModel,
    training_pool: &[QuantumState],
    full_dataset: &[QuantumState],
    hyper: &TrainHyper,
    rng: &mut impl Rng,
    mut epoch_hook: impl FnMut(usize, &DqganModel),
) -> Result<(DqganModel, Vec<TrainingRecord>)> {
    hyper.validate()?;
    if training_pool.len() < hyper.s {
        return Err(Error::BatchTooLarge {
            requested: hyper.s,
            available: training_pool.len(),
        });
    }
    let input_width = model.generator_arch().input_width();
    let mut current = model.clone();
    let mut records = Vec::with_capacity(hyper.r_t);

    for epoch in 1..=hyper.r_t {
        let batch_indices = sample_without_replacement(training_pool.len(), hyper.s, rng);
        let batch: Vec<QuantumState> = batch_indices
            .iter()
            .map(|&i| training_pool[i].clone())
            .collect();

        for _ in 0..hyper.r_d {
            let inputs: Vec<QuantumState> = (0..hyper.s)
                .map(|_| random_pure_state(input_width, rng))
                .collect();
            let update_batch = UpdateBatch {
                inputs,
                training: batch.clone(),
            };
            let updates =
                compute_updates(&current, SubNetwork::Discriminator, &update_batch, hyper)?;
            current = apply_updates(&current, SubNetwork::Discriminator, &updates, hyper.epsilon)?;
        }
        for _ in 0..hyper.r_g {
            let inputs: Vec<QuantumState> = (0..hyper.s)
                .map(|_| random_pure_state(input_width, rng))
                .collect();
            let update_batch = UpdateBatch {
                inputs,
                training: Vec::new(),
            };
            let updates = compute_updates(&current, SubNetwork::Generator, &update_batch, hyper)?;
            current = apply_updates(&current, SubNetwork::Generator, &updates, hyper.epsilon)?;
        }

        let eval_inputs: Vec<QuantumState> = (0..hyper.s)
            .map(|_| random_pure_state(input_width, rng))
            .collect();
        let record_loss_d = loss_d(&current, &eval_inputs, &batch)?;
        let record_loss_g = loss_g(&current, &eval_inputs)?;
        let validation_inputs: Vec<QuantumState> = (0..hyper.v)
            .map(|_| random_pure_state(input_width, rng))
            .collect();
        let record_loss_v = validation_loss(&current, &validation_inputs, full_dataset)?;

        records.push(TrainingRecord {
            epoch,
            t: epoch as f64 * hyper.epsilon,
            loss_d: record_loss_d,
            loss_g: record_loss_g,
            loss_v: record_loss_v,
        });
        epoch_hook(epoch, &current);
    }

    Ok((current, records))
}
