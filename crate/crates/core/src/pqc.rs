//! Circuit-level realisation of the dissipative networks: canonical
//! two-qubit gates plus general single-qubit rotations, arranged layer by
//! layer with a partial trace over each layer's input qubits, and trained by
//! finite-difference gradient ascent instead of exact exponential updates.

use rand::Rng;

use crate::dqgan::{sample_without_replacement, validation_loss_with, TrainingRecord};
use crate::dqnn::NetworkArchitecture;
use crate::linalg::{
    embed, fidelity, partial_trace_op, random_pure_state, ComplexMatrix, QuantumState, C64,
};
use crate::{Error, Result};

/// Gate families used by the circuit layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    /// Two-qubit canonical gate CAN(t_x, t_y, t_z).
    Can,
    /// General single-qubit gate u(t_1, t_2, t_3).
    U3,
}

/// One parameterised gate: which qubits it acts on and which parameter
/// slots feed it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateSpec {
    pub kind: GateKind,
    /// Register qubits, MSB-first; 2 for CAN, 1 for U3.
    pub qubits: Vec<usize>,
    /// Indices into the parameter vector.
    pub slots: [usize; 3],
}

/// Plan entries in execution order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CircuitOp {
    Gate(GateSpec),
    /// Trace out the listed qubits.
    Trace(Vec<usize>),
}

/// A full layered circuit: gates interleaved with per-layer trace points.
#[derive(Debug, Clone)]
pub struct CircuitPlan {
    architecture: NetworkArchitecture,
    plus_variant: bool,
    ops: Vec<CircuitOp>,
    total_params: usize,
}

/// Closed-form parameter count of the standard (non-plus) layout:
/// 3·m_{L+1} + 3·Σ_l m_{l−1}(1 + m_l).
pub fn standard_param_count(arch: &NetworkArchitecture) -> usize {
    let mut count = 3 * arch.output_width();
    for l in 1..=arch.num_perceptron_layers() {
        count += 3 * arch.width(l - 1) * (1 + arch.width(l));
    }
    count
}

impl CircuitPlan {
    pub fn architecture(&self) -> &NetworkArchitecture {
        &self.architecture
    }

    pub fn plus_variant(&self) -> bool {
        self.plus_variant
    }

    pub fn total_params(&self) -> usize {
        self.total_params
    }

    pub fn ops(&self) -> &[CircuitOp] {
        &self.ops
    }

    pub fn input_width(&self) -> usize {
        self.architecture.input_width()
    }

    pub fn output_width(&self) -> usize {
        self.architecture.output_width()
    }

    /// Line-oriented text form: `CAN q_i q_j a b c`, `U3 q a b c`,
    /// `TRACE q...`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for op in &self.ops {
            match op {
                CircuitOp::Gate(g) => {
                    let name = match g.kind {
                        GateKind::Can => "CAN",
                        GateKind::U3 => "U3",
                    };
                    out.push_str(name);
                    for q in &g.qubits {
                        out.push_str(&format!(" {q}"));
                    }
                    for s in g.slots {
                        out.push_str(&format!(" {s}"));
                    }
                }
                CircuitOp::Trace(qs) => {
                    out.push_str("TRACE");
                    for q in qs {
                        out.push_str(&format!(" {q}"));
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Lays out the layered circuit for an architecture. Parameter slots are
/// assigned in emission order.
///
/// Per layer: u on each input qubit, then for each output qubit j the
/// CAN gates pairing it with every input qubit, then the trace over the
/// input qubits; the plus variant repeats the CAN block with a fresh u
/// layer on all live qubits in between. A final u acts on each output
/// qubit of the last layer.
pub fn build_circuit(arch: &NetworkArchitecture, plus_variant: bool) -> CircuitPlan {
    let mut ops = Vec::new();
    let mut next_slot = 0usize;
    let mut take_slots = || {
        let s = [next_slot, next_slot + 1, next_slot + 2];
        next_slot += 3;
        s
    };

    // Global qubit ids follow the concatenated layer layout.
    let mut offsets = Vec::with_capacity(arch.num_layers());
    let mut acc = 0;
    for &w in arch.layer_widths() {
        offsets.push(acc);
        acc += w;
    }

    for l in 1..=arch.num_perceptron_layers() {
        let inputs: Vec<usize> = (offsets[l - 1]..offsets[l - 1] + arch.width(l - 1)).collect();
        let outputs: Vec<usize> = (offsets[l]..offsets[l] + arch.width(l)).collect();

        for &q in &inputs {
            ops.push(CircuitOp::Gate(GateSpec {
                kind: GateKind::U3,
                qubits: vec![q],
                slots: take_slots(),
            }));
        }
        let emit_can_block = |ops: &mut Vec<CircuitOp>, take: &mut dyn FnMut() -> [usize; 3]| {
            for &out in &outputs {
                for &inp in &inputs {
                    ops.push(CircuitOp::Gate(GateSpec {
                        kind: GateKind::Can,
                        qubits: vec![inp, out],
                        slots: take(),
                    }));
                }
            }
        };
        emit_can_block(&mut ops, &mut take_slots);
        if plus_variant {
            for &q in inputs.iter().chain(&outputs) {
                ops.push(CircuitOp::Gate(GateSpec {
                    kind: GateKind::U3,
                    qubits: vec![q],
                    slots: take_slots(),
                }));
            }
            emit_can_block(&mut ops, &mut take_slots);
        }
        ops.push(CircuitOp::Trace(inputs));
    }

    let last = arch.num_perceptron_layers();
    for q in offsets[last]..offsets[last] + arch.width(last) {
        ops.push(CircuitOp::Gate(GateSpec {
            kind: GateKind::U3,
            qubits: vec![q],
            slots: take_slots(),
        }));
    }

    if !plus_variant {
        debug_assert_eq!(next_slot, standard_param_count(arch));
    }
    CircuitPlan {
        architecture: arch.clone(),
        plus_variant,
        ops,
        total_params: next_slot,
    }
}

fn two_qubit_rotation(pauli: [[C64; 2]; 2], t: f64) -> ComplexMatrix {
    // exp(−i(π/2)t P⊗P) = cos(πt/2)·I − i·sin(πt/2)·P⊗P for involutive P.
    let mut pp = ComplexMatrix::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    pp[(2 * a + c, 2 * b + d)] = pauli[a][b] * pauli[c][d];
                }
            }
        }
    }
    let angle = std::f64::consts::PI * t / 2.0;
    let mut out = ComplexMatrix::identity(4).scale(C64::new(angle.cos(), 0.0));
    let phase = C64::new(0.0, -angle.sin());
    for i in 0..4 {
        for j in 0..4 {
            out[(i, j)] += phase * pp[(i, j)];
        }
    }
    out
}

/// CAN(t_x, t_y, t_z) = RXX(t_xπ)·RYY(t_yπ)·RZZ(t_zπ). The three factors
/// commute, so the ordering is immaterial.
pub fn can_gate(tx: f64, ty: f64, tz: f64) -> ComplexMatrix {
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let x = [[zero, one], [one, zero]];
    let y = [[zero, C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), zero]];
    let z = [[one, zero], [zero, -one]];
    let rxx = two_qubit_rotation(x, tx);
    let ryy = two_qubit_rotation(y, ty);
    let rzz = two_qubit_rotation(z, tz);
    &(&rxx * &ryy) * &rzz
}

/// u(t_1, t_2, t_3) =
/// [[cos(t1/2), −e^{it3}·sin(t1/2)], [e^{it2}·sin(t1/2), e^{i(t2+t3)}·cos(t1/2)]].
pub fn u3_gate(t1: f64, t2: f64, t3: f64) -> ComplexMatrix {
    let c = (t1 / 2.0).cos();
    let s = (t1 / 2.0).sin();
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(0, 0)] = C64::new(c, 0.0);
    m[(0, 1)] = -C64::new(0.0, t3).exp() * s;
    m[(1, 0)] = C64::new(0.0, t2).exp() * s;
    m[(1, 1)] = C64::new(0.0, t2 + t3).exp() * c;
    m
}

fn gate_matrix(spec: &GateSpec, params: &[f64]) -> ComplexMatrix {
    let [a, b, c] = spec.slots;
    match spec.kind {
        GateKind::Can => can_gate(params[a], params[b], params[c]),
        GateKind::U3 => u3_gate(params[a], params[b], params[c]),
    }
}

/// Density-matrix execution of a plan. Fresh qubits are appended in |0⟩ the
/// first time a gate touches them; trace points discard spent qubits.
pub fn evaluate_circuit(
    plan: &CircuitPlan,
    params: &[f64],
    rho_in: &QuantumState,
) -> Result<QuantumState> {
    if params.len() != plan.total_params {
        return Err(Error::ParameterCount {
            got: params.len(),
            expected: plan.total_params,
        });
    }
    if rho_in.num_qubits() != plan.input_width() {
        return Err(Error::DimensionMismatch(format!(
            "circuit expects {} input qubits, got {}",
            plan.input_width(),
            rho_in.num_qubits()
        )));
    }

    // `live` maps register position -> global qubit id.
    let mut live: Vec<usize> = (0..plan.input_width()).collect();
    let mut rho = rho_in.density();

    for op in &plan.ops {
        match op {
            CircuitOp::Gate(spec) => {
                for &q in &spec.qubits {
                    if !live.contains(&q) {
                        let dim = rho.rows();
                        let mut grown = ComplexMatrix::zeros(2 * dim, 2 * dim);
                        for i in 0..dim {
                            for j in 0..dim {
                                grown[(2 * i, 2 * j)] = rho[(i, j)];
                            }
                        }
                        rho = grown;
                        live.push(q);
                    }
                }
                let positions: Vec<usize> = spec
                    .qubits
                    .iter()
                    .map(|q| live.iter().position(|g| g == q).unwrap())
                    .collect();
                let full = embed(&gate_matrix(spec, params), &positions, live.len())?;
                rho = full.conjugate(&rho);
            }
            CircuitOp::Trace(discard) => {
                let keep: Vec<usize> = (0..live.len())
                    .filter(|p| !discard.contains(&live[*p]))
                    .collect();
                rho = partial_trace_op(&rho, live.len(), &keep)?;
                live.retain(|g| !discard.contains(g));
            }
        }
    }
    QuantumState::mixed(live.len(), rho)
}

/// Central-difference gradient: (L(ω+εe_k) − L(ω−εe_k)) / 2ε per slot.
pub fn fd_gradient(
    mut loss_fn: impl FnMut(&[f64]) -> Result<f64>,
    params: &[f64],
    fd_step: f64,
) -> Result<Vec<f64>> {
    if fd_step <= 0.0 {
        return Err(Error::Other("fd_step must be positive".into()));
    }
    let mut work = params.to_vec();
    let mut grad = Vec::with_capacity(params.len());
    for k in 0..params.len() {
        work[k] = params[k] + fd_step;
        let plus = loss_fn(&work)?;
        work[k] = params[k] - fd_step;
        let minus = loss_fn(&work)?;
        work[k] = params[k];
        let g = (plus - minus) / (2.0 * fd_step);
        if !g.is_finite() {
            return Err(Error::NonFiniteLoss);
        }
        grad.push(g);
    }
    Ok(grad)
}

fn check_seam(gen_plan: &CircuitPlan, dis_plan: &CircuitPlan) -> Result<()> {
    if gen_plan.output_width() != dis_plan.input_width() {
        return Err(Error::InvalidArchitecture(format!(
            "generator output width {} does not match discriminator input width {}",
            gen_plan.output_width(),
            dis_plan.input_width()
        )));
    }
    if dis_plan.output_width() != 1 {
        return Err(Error::InvalidArchitecture(format!(
            "discriminator output layer must be one qubit wide, got {}",
            dis_plan.output_width()
        )));
    }
    Ok(())
}

/// L_D in circuit mode: ⟨0|-projection of discriminated generator output
/// plus ⟨1|-projection of discriminated training states.
pub fn circuit_loss_d(
    gen_plan: &CircuitPlan,
    dis_plan: &CircuitPlan,
    gen_params: &[f64],
    dis_params: &[f64],
    inputs: &[QuantumState],
    training: &[QuantumState],
) -> Result<f64> {
    check_seam(gen_plan, dis_plan)?;
    if inputs.is_empty() || training.is_empty() {
        return Err(Error::EmptyBatch("loss_D needs both batches".into()));
    }
    let zero = QuantumState::basis_state(1, 0);
    let one = QuantumState::basis_state(1, 1);
    let mut generated_term = 0.0;
    for psi in inputs {
        let fake = evaluate_circuit(gen_plan, gen_params, psi)?;
        let out = evaluate_circuit(dis_plan, dis_params, &fake)?;
        generated_term += fidelity(&zero, &out)?;
    }
    let mut training_term = 0.0;
    for phi in training {
        let out = evaluate_circuit(dis_plan, dis_params, phi)?;
        training_term += fidelity(&one, &out)?;
    }
    Ok(generated_term / inputs.len() as f64 + training_term / training.len() as f64)
}

/// L_G in circuit mode.
pub fn circuit_loss_g(
    gen_plan: &CircuitPlan,
    dis_plan: &CircuitPlan,
    gen_params: &[f64],
    dis_params: &[f64],
    inputs: &[QuantumState],
) -> Result<f64> {
    check_seam(gen_plan, dis_plan)?;
    if inputs.is_empty() {
        return Err(Error::EmptyBatch("loss_G needs inputs".into()));
    }
    let one = QuantumState::basis_state(1, 1);
    let mut acc = 0.0;
    for psi in inputs {
        let fake = evaluate_circuit(gen_plan, gen_params, psi)?;
        let out = evaluate_circuit(dis_plan, dis_params, &fake)?;
        acc += fidelity(&one, &out)?;
    }
    Ok(acc / inputs.len() as f64)
}

/// Hyper-parameters of the circuit-mode adversarial loop.
#[derive(Debug, Clone)]
pub struct CircuitGanHyper {
    pub r_t: usize,
    pub r_d: usize,
    pub r_g: usize,
    pub s: usize,
    pub v: usize,
    pub eta_d: f64,
    pub eta_g: f64,
    pub fd_step: f64,
}

impl CircuitGanHyper {
    pub fn validate(&self) -> Result<()> {
        if self.eta_d <= 0.0 || self.eta_g <= 0.0 || self.fd_step <= 0.0 {
            return Err(Error::Other(
                "learning rates and fd_step must be positive".into(),
            ));
        }
        if self.s == 0 || self.v == 0 {
            return Err(Error::Other("S and V must be at least 1".into()));
        }
        Ok(())
    }
}

/// Gradient-ascent adversarial training of two circuit plans. Same loop
/// shape as the exact-mode trainer: per epoch, S pool states without
/// replacement, r_D discriminator rounds then r_G generator rounds (fresh
/// random inputs each round), then per-epoch loss recording. Parameters
/// initialise uniformly in [0, 1). `t` in the records counts epochs.
pub fn train_dqgan_q(
    gen_plan: &CircuitPlan,
    dis_plan: &CircuitPlan,
    training_pool: &[QuantumState],
    full_dataset: &[QuantumState],
    hyper: &CircuitGanHyper,
    rng: &mut impl Rng,
    mut epoch_hook: impl FnMut(usize, &[f64], &[f64]),
) -> Result<(Vec<f64>, Vec<f64>, Vec<TrainingRecord>)> {
    hyper.validate()?;
    check_seam(gen_plan, dis_plan)?;
    if training_pool.len() < hyper.s {
        return Err(Error::BatchTooLarge {
            requested: hyper.s,
            available: training_pool.len(),
        });
    }

    let input_width = gen_plan.input_width();
    let mut gen_params: Vec<f64> = (0..gen_plan.total_params()).map(|_| rng.gen::<f64>()).collect();
    let mut dis_params: Vec<f64> = (0..dis_plan.total_params()).map(|_| rng.gen::<f64>()).collect();
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
            // The generator is frozen here, so its outputs can be computed
            // once instead of inside every finite-difference evaluation.
            let fakes: Vec<QuantumState> = inputs
                .iter()
                .map(|psi| evaluate_circuit(gen_plan, &gen_params, psi))
                .collect::<Result<_>>()?;
            let zero = QuantumState::basis_state(1, 0);
            let one = QuantumState::basis_state(1, 1);
            let loss = |dp: &[f64]| -> Result<f64> {
                let mut generated_term = 0.0;
                for fake in &fakes {
                    let out = evaluate_circuit(dis_plan, dp, fake)?;
                    generated_term += fidelity(&zero, &out)?;
                }
                let mut training_term = 0.0;
                for phi in &batch {
                    let out = evaluate_circuit(dis_plan, dp, phi)?;
                    training_term += fidelity(&one, &out)?;
                }
                Ok(generated_term / fakes.len() as f64 + training_term / batch.len() as f64)
            };
            let grad = fd_gradient(loss, &dis_params, hyper.fd_step)?;
            for (p, g) in dis_params.iter_mut().zip(&grad) {
                *p += hyper.eta_d * g;
            }
        }

        for _ in 0..hyper.r_g {
            let inputs: Vec<QuantumState> = (0..hyper.s)
                .map(|_| random_pure_state(input_width, rng))
                .collect();
            let loss = |gp: &[f64]| {
                circuit_loss_g(gen_plan, dis_plan, gp, &dis_params, &inputs)
            };
            let grad = fd_gradient(loss, &gen_params, hyper.fd_step)?;
            for (p, g) in gen_params.iter_mut().zip(&grad) {
                *p += hyper.eta_g * g;
            }
        }

        let eval_inputs: Vec<QuantumState> = (0..hyper.s)
            .map(|_| random_pure_state(input_width, rng))
            .collect();
        let record_loss_d = circuit_loss_d(
            gen_plan,
            dis_plan,
            &gen_params,
            &dis_params,
            &eval_inputs,
            &batch,
        )?;
        let record_loss_g =
            circuit_loss_g(gen_plan, dis_plan, &gen_params, &dis_params, &eval_inputs)?;
        let validation_inputs: Vec<QuantumState> = (0..hyper.v)
            .map(|_| random_pure_state(input_width, rng))
            .collect();
        let record_loss_v = validation_loss_with(
            |psi| evaluate_circuit(gen_plan, &gen_params, psi),
            &validation_inputs,
            full_dataset,
        )?;

        records.push(TrainingRecord {
            epoch,
            t: epoch as f64,
            loss_d: record_loss_d,
            loss_g: record_loss_g,
            loss_v: record_loss_v,
        });
        epoch_hook(epoch, &gen_params, &dis_params);
    }

    Ok((gen_params, dis_params, records))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn arch(widths: &[usize]) -> NetworkArchitecture {
        NetworkArchitecture::new(widths.to_vec()).unwrap()
    }

    #[test]
    fn can_gate_identities() {
        let i4 = ComplexMatrix::identity(4);
        assert!(can_gate(0.0, 0.0, 0.0).max_abs_diff(&i4) < 1e-15);

        // CAN(1,0,0) = −i·X⊗X.
        let mut xx = ComplexMatrix::zeros(4, 4);
        xx[(0, 3)] = C64::new(0.0, -1.0);
        xx[(1, 2)] = C64::new(0.0, -1.0);
        xx[(2, 1)] = C64::new(0.0, -1.0);
        xx[(3, 0)] = C64::new(0.0, -1.0);
        assert!(can_gate(1.0, 0.0, 0.0).max_abs_diff(&xx) < 1e-12);
    }

    #[test]
    fn can_factors_commute() {
        let (tx, ty, tz) = (0.37, -0.81, 0.22);
        let zero = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let x = [[zero, one], [one, zero]];
        let y = [[zero, C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), zero]];
        let z = [[one, zero], [zero, -one]];
        let rxx = two_qubit_rotation(x, tx);
        let ryy = two_qubit_rotation(y, ty);
        let rzz = two_qubit_rotation(z, tz);
        let forward = &(&rxx * &ryy) * &rzz;
        let reversed = &(&rzz * &ryy) * &rxx;
        assert!(forward.max_abs_diff(&reversed) < 1e-12);
        assert!(forward.max_abs_diff(&can_gate(tx, ty, tz)) < 1e-15);
    }

    #[test]
    fn u3_gate_identities_and_unitarity() {
        assert!(u3_gate(0.0, 0.0, 0.0).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);

        // u(π, 0, π) = X.
        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(u3_gate(std::f64::consts::PI, 0.0, std::f64::consts::PI).max_abs_diff(&x) < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let g = u3_gate(
                rng.gen_range(-4.0..4.0),
                rng.gen_range(-4.0..4.0),
                rng.gen_range(-4.0..4.0),
            );
            assert!(g.unitarity_deviation() < 1e-12);
            let c = can_gate(
                rng.gen_range(-4.0..4.0),
                rng.gen_range(-4.0..4.0),
                rng.gen_range(-4.0..4.0),
            );
            assert!(c.unitarity_deviation() < 1e-12);
        }
    }

    #[test]
    fn parameter_counts() {
        assert_eq!(standard_param_count(&arch(&[1, 1])), 9);
        assert_eq!(standard_param_count(&arch(&[2, 3, 2])), 57);
        assert_eq!(build_circuit(&arch(&[1, 1]), false).total_params(), 9);
        assert_eq!(build_circuit(&arch(&[2, 3, 2]), false).total_params(), 57);
        assert_eq!(build_circuit(&arch(&[1, 1]), true).total_params(), 18);
    }

    #[test]
    fn closed_form_matches_enumeration_for_small_shapes() {
        for widths in [
            vec![1, 1],
            vec![1, 2],
            vec![2, 1],
            vec![3, 2],
            vec![1, 2, 1],
            vec![2, 3, 2],
            vec![3, 3, 3],
            vec![1, 2, 3, 1],
        ] {
            let a = arch(&widths);
            assert_eq!(
                build_circuit(&a, false).total_params(),
                standard_param_count(&a),
                "{widths:?}"
            );
        }
    }

    #[test]
    fn plan_text_for_smallest_shape() {
        let plan = build_circuit(&arch(&[1, 1]), false);
        assert_eq!(
            plan.to_text(),
            "U3 0 0 1 2\nCAN 0 1 3 4 5\nTRACE 0\nU3 1 6 7 8\n"
        );
    }

    #[test]
    fn zero_parameters_collapse_to_ground_state() {
        let plan = build_circuit(&arch(&[2, 3, 2]), false);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let psi = random_pure_state(2, &mut rng);
        let out = evaluate_circuit(&plan, &vec![0.0; plan.total_params()], &psi).unwrap();
        let ground = QuantumState::zero_state(2);
        assert!(out.density().max_abs_diff(&ground.density()) < 1e-12);
    }

    #[test]
    fn circuit_output_is_a_valid_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for plus in [false, true] {
            let plan = build_circuit(&arch(&[2, 2]), plus);
            let params: Vec<f64> = (0..plan.total_params()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let psi = random_pure_state(2, &mut rng);
            let out = evaluate_circuit(&plan, &params, &psi).unwrap();
            let rho = out.density();
            assert!((rho.trace().re - 1.0).abs() < 1e-12);
            assert!(rho.hermiticity_deviation() < 1e-12);
        }
    }

    #[test]
    fn swap_equivalent_can_forwards_the_input() {
        // CAN(0.5, 0.5, 0.5) is SWAP up to a global phase, so the 1-1
        // circuit with identity u gates acts as the identity channel.
        let plan = build_circuit(&arch(&[1, 1]), false);
        let params = vec![0.0, 0.0, 0.0, 0.5, 0.5, 0.5, 0.0, 0.0, 0.0];
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let psi = random_pure_state(1, &mut rng);
            let out = evaluate_circuit(&plan, &params, &psi).unwrap();
            assert!(out.density().max_abs_diff(&psi.density()) < 1e-9);
        }
    }

    #[test]
    fn matches_abstract_forward_on_one_one() {
        use crate::dqnn::{forward, PerceptronSet};
        let a = arch(&[1, 1]);
        let plan = build_circuit(&a, false);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let params: Vec<f64> = (0..9).map(|_| rng.gen_range(-2.0..2.0)).collect();
            // Compose (I⊗u_out)·CAN·(u_in⊗I) into one perceptron unitary.
            let u_in = embed(&u3_gate(params[0], params[1], params[2]), &[0], 2).unwrap();
            let can = can_gate(params[3], params[4], params[5]);
            let u_out = embed(&u3_gate(params[6], params[7], params[8]), &[1], 2).unwrap();
            let composed = &(&u_out * &can) * &u_in;
            let mut set = PerceptronSet::identity(&a);
            set.set_unitary(1, 1, composed).unwrap();

            let psi = random_pure_state(1, &mut rng);
            let via_circuit = evaluate_circuit(&plan, &params, &psi).unwrap();
            let via_channel = forward(&psi, &set).unwrap();
            assert!(
                via_circuit
                    .density()
                    .max_abs_diff(&via_channel.density())
                    < 1e-9
            );
        }
    }

    #[test]
    fn fd_gradient_on_constant_loss_is_zero() {
        let grad = fd_gradient(|_| Ok(1.25), &[0.3, -0.7, 2.0], 1e-3).unwrap();
        assert_eq!(grad, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn fd_gradient_matches_analytic_rotation_derivative() {
        // A single CAN(t,0,0) on (input, output) with the |1⟩ projection of
        // the output gives ⟨1|ρ|1⟩ = sin²(πt/2); d/dt = (π/2)·sin(πt).
        let plan = build_circuit(&arch(&[1, 1]), false);
        let one = QuantumState::basis_state(1, 1);
        let loss = |p: &[f64]| {
            let input = QuantumState::basis_state(1, 1);
            let out = evaluate_circuit(&plan, p, &input)?;
            fidelity(&one, &out)
        };
        let t = 0.5;
        let params = vec![0.0, 0.0, 0.0, t, 0.0, 0.0, 0.0, 0.0, 0.0];
        let fd_step = 1e-3;
        let grad = fd_gradient(loss, &params, fd_step).unwrap();
        let analytic = std::f64::consts::PI / 2.0 * (std::f64::consts::PI * t).sin();
        assert!(
            (grad[3] - analytic).abs() < 10.0 * fd_step * fd_step,
            "fd {} vs analytic {}",
            grad[3],
            analytic
        );
    }

    #[test]
    fn fd_gradient_converges_at_second_order() {
        let plan = build_circuit(&arch(&[1, 1]), false);
        let one = QuantumState::basis_state(1, 1);
        let loss = |p: &[f64]| {
            let input = QuantumState::basis_state(1, 1);
            let out = evaluate_circuit(&plan, p, &input)?;
            fidelity(&one, &out)
        };
        let t = 0.3;
        let params = vec![0.0, 0.0, 0.0, t, 0.0, 0.0, 0.0, 0.0, 0.0];
        let analytic = std::f64::consts::PI / 2.0 * (std::f64::consts::PI * t).sin();
        let err = |h: f64| (fd_gradient(&loss, &params, h).unwrap()[3] - analytic).abs();
        let coarse = err(2e-2);
        let fine = err(1e-2);
        let ratio = coarse / fine;
        assert!((3.0..5.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn training_is_deterministic_and_zero_epochs_no_op() {
        let gen_plan = build_circuit(&arch(&[1, 1]), false);
        let dis_plan = build_circuit(&arch(&[1, 1]), false);
        let pool = crate::datasets::data_line(10).unwrap();
        let hyper = CircuitGanHyper {
            r_t: 2,
            r_d: 1,
            r_g: 1,
            s: 3,
            v: 3,
            eta_d: 0.5,
            eta_g: 0.1,
            fd_step: 1e-3,
        };
        let run = |r_t: usize| {
            let mut rng = ChaCha8Rng::seed_from_u64(6);
            let h = CircuitGanHyper { r_t, ..hyper.clone() };
            train_dqgan_q(
                &gen_plan,
                &dis_plan,
                pool.states(),
                pool.states(),
                &h,
                &mut rng,
                |_, _, _| {},
            )
            .unwrap()
        };
        let (gp0, dp0, rec0) = run(0);
        assert!(rec0.is_empty());
        // With r_T = 0 the parameters are exactly the random initialisation.
        assert_eq!(gp0.len(), 9);
        assert_eq!(dp0.len(), 9);

        let (gp_a, dp_a, rec_a) = run(2);
        let (gp_b, dp_b, rec_b) = run(2);
        assert_eq!(gp_a, gp_b);
        assert_eq!(dp_a, dp_b);
        assert_eq!(rec_a, rec_b);
        for r in &rec_a {
            assert!(r.loss_d >= 0.0 && r.loss_d <= 2.0);
            assert!(r.loss_g >= 0.0 && r.loss_g <= 1.0);
            assert!(r.loss_v >= 0.0 && r.loss_v <= 1.0);
        }
    }

    #[test]
    fn seam_mismatch_is_rejected() {
        let gen_plan = build_circuit(&arch(&[1, 2]), false);
        let dis_plan = build_circuit(&arch(&[1, 1]), false);
        let psi = QuantumState::basis_state(1, 0);
        let err = circuit_loss_g(&gen_plan, &dis_plan, &[0.0; 15], &[0.0; 9], &[psi])
            .unwrap_err();
        assert!(err.to_string().contains("width"));
    }
}
