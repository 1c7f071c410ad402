//! Randomized invariants, checked against brute-force oracles that share no
//! code with the simulator kernels.

use bellscope::bell::{bell_state, classify_bell, BellLabel, CLASSIFY_TOL};
use bellscope::circuit::{Circuit, CircuitOp};
use bellscope::discriminator::{
    discriminate, forced_joint, label_from_bits, predicted_distribution, run_stage,
    stabilizer_expectation, Stabilizer, StageId,
};
use bellscope::gates::{Gate, StandardGate};
use bellscope::statevec::{StateError, StateVector};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Dense 2^n x 2^n matrix of a single-qubit gate, built column-by-column
/// from the basis-state definition: independent of the pair-loop kernel.
#[allow(clippy::needless_range_loop)] // col is the matrix column being built
fn single_qubit_matrix(n: usize, gate: &Gate, qubit: usize) -> Vec<Vec<Complex64>> {
    let dim = 1usize << n;
    let mask = 1usize << (n - 1 - qubit);
    let mut m = vec![vec![zero(); dim]; dim];
    for col in 0..dim {
        let b = usize::from(col & mask != 0);
        for b_out in 0..2 {
            let row = if b_out == 0 { col & !mask } else { col | mask };
            m[row][col] += gate.entry(b_out, b);
        }
    }
    m
}

/// Dense matrix of a controlled gate: identity block where the control bit
/// is 0, the single-qubit action where it is 1.
#[allow(clippy::needless_range_loop)] // col is the matrix column being built
fn controlled_matrix(n: usize, gate: &Gate, control: usize, target: usize) -> Vec<Vec<Complex64>> {
    let dim = 1usize << n;
    let cmask = 1usize << (n - 1 - control);
    let tmask = 1usize << (n - 1 - target);
    let mut m = vec![vec![zero(); dim]; dim];
    for col in 0..dim {
        if col & cmask == 0 {
            m[col][col] = Complex64::new(1.0, 0.0);
        } else {
            let b = usize::from(col & tmask != 0);
            for b_out in 0..2 {
                let row = if b_out == 0 {
                    col & !tmask
                } else {
                    col | tmask
                };
                m[row][col] += gate.entry(b_out, b);
            }
        }
    }
    m
}

fn mat_vec(m: &[Vec<Complex64>], v: &[Complex64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn max_elem_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn normalized_state(pairs: Vec<(f64, f64)>) -> Option<StateVector> {
    let amps: Vec<Complex64> = pairs
        .iter()
        .map(|&(re, im)| Complex64::new(re, im))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-3 {
        return None;
    }
    let amps = amps.into_iter().map(|a| a / norm).collect();
    Some(StateVector::from_amplitudes(amps).expect("normalized by construction"))
}

fn arb_state(n: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n)
        .prop_filter_map("norm too small", normalized_state)
}

fn arb_state_and_qubit() -> impl Strategy<Value = (StateVector, usize)> {
    (1usize..=4).prop_flat_map(|n| (arb_state(n), 0..n))
}

fn arb_state_and_pair() -> impl Strategy<Value = (StateVector, usize, usize)> {
    (2usize..=4)
        .prop_flat_map(|n| (arb_state(n), 0..n, 0..n))
        .prop_filter("control equals target", |(_, c, t)| c != t)
}

fn arb_gate() -> impl Strategy<Value = StandardGate> {
    prop::sample::select(StandardGate::ALL.to_vec())
}

/// Gate-only circuit ops on n qubits (n ≥ 2 so cx is always available).
fn arb_gate_ops(n: usize) -> impl Strategy<Value = Vec<CircuitOp>> {
    let single = (arb_gate(), 0..n).prop_map(|(gate, qubit)| CircuitOp::Gate { gate, qubit });
    let controlled = (0..n, 0..n)
        .prop_filter("control equals target", |(c, t)| c != t)
        .prop_map(|(control, target)| CircuitOp::Controlled {
            gate: StandardGate::X,
            control,
            target,
        });
    prop::collection::vec(prop_oneof![3 => single, 1 => controlled], 0..=12)
}

fn build_circuit(n: usize, ops: &[CircuitOp]) -> Circuit {
    let mut c = Circuit::new(n).expect("n is in range");
    for &op in ops {
        c.push(op).expect("ops generated in range");
    }
    c
}

proptest! {
    #[test]
    fn single_gates_preserve_norm(
        (state, qubit) in arb_state_and_qubit(),
        gate in arb_gate(),
    ) {
        let out = state.apply_single(&gate.gate(), qubit).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn controlled_gates_preserve_norm(
        (state, control, target) in arb_state_and_pair(),
        gate in arb_gate(),
    ) {
        let out = state.apply_controlled(&gate.gate(), control, target).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hadamard_twice_is_identity((state, qubit) in arb_state_and_qubit()) {
        let h = StandardGate::H.gate();
        let back = state.apply_single(&h, qubit).unwrap().apply_single(&h, qubit).unwrap();
        prop_assert!(max_elem_diff(back.amplitudes(), state.amplitudes()) <= 1e-12);
    }

    #[test]
    fn single_gate_matches_matrix_oracle(
        (state, qubit) in arb_state_and_qubit(),
        gate in arb_gate(),
    ) {
        let fast = state.apply_single(&gate.gate(), qubit).unwrap();
        let oracle = mat_vec(
            &single_qubit_matrix(state.num_qubits(), &gate.gate(), qubit),
            state.amplitudes(),
        );
        prop_assert!(max_elem_diff(fast.amplitudes(), &oracle) <= 1e-12);
    }

    #[test]
    fn controlled_gate_matches_matrix_oracle(
        (state, control, target) in arb_state_and_pair(),
        gate in arb_gate(),
    ) {
        let fast = state.apply_controlled(&gate.gate(), control, target).unwrap();
        let oracle = mat_vec(
            &controlled_matrix(state.num_qubits(), &gate.gate(), control, target),
            state.amplitudes(),
        );
        prop_assert!(max_elem_diff(fast.amplitudes(), &oracle) <= 1e-12);
    }

    #[test]
    fn outcome_probs_sum_to_one((state, qubit) in arb_state_and_qubit()) {
        let (p0, p1) = state.outcome_probs(qubit).unwrap();
        prop_assert!((p0 + p1 - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn projection_leaves_definite_bit((state, qubit) in arb_state_and_qubit(), bit in 0u8..2) {
        match state.project_qubit(qubit, bit) {
            Ok((prob, collapsed)) => {
                prop_assert!(prob > 0.0 && prob <= 1.0 + 1e-12);
                prop_assert!((collapsed.norm_sqr() - 1.0).abs() <= 1e-12);
                let (p0, p1) = collapsed.outcome_probs(qubit).unwrap();
                let kept = if bit == 0 { p0 } else { p1 };
                prop_assert!((kept - 1.0).abs() <= 1e-12);
            }
            Err(StateError::ImpossibleOutcome { .. }) => {
                let (p0, p1) = state.outcome_probs(qubit).unwrap();
                let refused = if bit == 0 { p0 } else { p1 };
                prop_assert!(refused < 1e-14);
            }
            Err(other) => prop_assert!(false, "unexpected error {other}"),
        }
    }

    #[test]
    fn classification_is_phase_blind(
        label_index in 0usize..4,
        angle in 0.0f64..std::f64::consts::TAU,
    ) {
        let label = BellLabel::ALL[label_index];
        let phase = Complex64::from_polar(1.0, angle);
        let amps = bell_state(label).amplitudes().iter().map(|a| a * phase).collect();
        let rotated = StateVector::from_amplitudes(amps).unwrap();
        prop_assert_eq!(classify_bell(&rotated, CLASSIFY_TOL).unwrap(), Some(label));
    }

    #[test]
    fn joint_distribution_matches_bell_overlaps(state in arb_state(2)) {
        let predicted = predicted_distribution(&state).unwrap();
        for a1 in 0..2u8 {
            for a2 in 0..2u8 {
                let label = label_from_bits(a1, a2);
                match forced_joint(&state, a1, a2).unwrap() {
                    Some((joint, post)) => {
                        prop_assert!((joint - predicted[label.index()]).abs() < 1e-10);
                        let fid = post.fidelity_up_to_phase(&bell_state(label)).unwrap();
                        prop_assert!(fid >= 1.0 - 1e-9);
                    }
                    None => prop_assert!(predicted[label.index()] < 1e-10),
                }
            }
        }
    }

    #[test]
    fn stabilizer_identities_hold(state in arb_state(2)) {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for (stage, which) in [(StageId::Stage1, Stabilizer::XX), (StageId::Stage2, Stabilizer::ZZ)] {
            let p_one = match run_stage(&state, stage, Some(1), &mut rng) {
                Ok((_, prob, _)) => prob,
                Err(StateError::ImpossibleOutcome { .. }) => 0.0,
                Err(other) => return Err(TestCaseError::fail(format!("unexpected error {other}"))),
            };
            let expectation = stabilizer_expectation(&state, which).unwrap();
            prop_assert!((p_one - (1.0 - expectation) / 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn discrimination_is_idempotent(state in arb_state(2), seed in 0u64..1 << 48) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let first = discriminate(&state, &mut rng).unwrap();
        let second = discriminate(&first.post_state, &mut rng).unwrap();
        prop_assert_eq!((second.a1, second.a2), (first.a1, first.a2));
        prop_assert!((second.outcome_prob - 1.0).abs() <= 1e-12);
        let fid = second.post_state.fidelity_up_to_phase(&first.post_state).unwrap();
        prop_assert!(fid >= 1.0 - 1e-12);
    }

    #[test]
    fn gate_only_circuits_match_matrix_products(
        (n, ops) in (2usize..=4).prop_flat_map(|n| (Just(n), arb_gate_ops(n))),
        seed in 0u64..1 << 48,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let initial = StateVector::random(n, &mut rng).unwrap();
        let circuit = build_circuit(n, &ops);

        let (fast, bits) = circuit.run(Some(&initial), &mut rng).unwrap();
        prop_assert!(bits.is_empty());

        let mut oracle = initial.amplitudes().to_vec();
        for op in &ops {
            let m = match *op {
                CircuitOp::Gate { gate, qubit } => single_qubit_matrix(n, &gate.gate(), qubit),
                CircuitOp::Controlled { gate, control, target } => {
                    controlled_matrix(n, &gate.gate(), control, target)
                }
                CircuitOp::Measure { .. } => unreachable!("gate-only strategy"),
            };
            oracle = mat_vec(&m, &oracle);
        }
        prop_assert!(max_elem_diff(fast.amplitudes(), &oracle) <= 1e-12);
    }

    #[test]
    fn circuits_round_trip_through_text(
        (n, ops, measure) in (2usize..=4)
            .prop_flat_map(|n| (Just(n), arb_gate_ops(n), prop::option::of(0..n))),
    ) {
        let mut ops = ops;
        // sprinkle in a measurement so the round trip covers all three forms
        if let Some(qubit) = measure {
            ops.push(CircuitOp::Measure { qubit });
        }
        let circuit = build_circuit(n, &ops);
        let parsed: Circuit = circuit.to_string().parse().unwrap();
        prop_assert_eq!(parsed, circuit);
    }
}

/// Sampled frequencies track the analytic distribution: 10^5 draws on a
/// qubit with p1 = 0.3 land within ±0.01.
#[test]
fn measurement_frequencies_track_probabilities() {
    let amps = vec![
        Complex64::new(0.7f64.sqrt(), 0.0),
        Complex64::new(0.3f64.sqrt(), 0.0),
    ];
    let state = StateVector::from_amplitudes(amps).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let shots = 100_000;
    let mut ones = 0u64;
    for _ in 0..shots {
        let (bit, _) = state.measure_qubit(0, &mut rng).unwrap();
        ones += u64::from(bit);
    }
    let freq = ones as f64 / shots as f64;
    assert!((freq - 0.3).abs() < 0.01, "frequency {freq}");
}
