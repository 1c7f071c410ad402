//! Two-stage non-destructive Bell-state discrimination.
//!
//! Each Bell state is a joint eigenstate of X⊗X and Z⊗Z, and the four
//! eigenvalue sign pairs are distinct. Each stage adjoins one ancilla in
//! `|0>`, entangles it with the channel pair, and measures it, depositing
//! one stabilizer eigenvalue in the ancilla bit while leaving the channel
//! untouched:
//!
//! * Stage 1 surrounds two ancilla-controlled X gates with Hadamards on the
//!   ancilla. The ancilla is prepared in `|+>` and phase kickback rotates it
//!   to `|−>` exactly when the channel carries X⊗X eigenvalue −1, so the
//!   measured bit a1 is 0 for eigenvalue +1 and 1 for −1.
//! * Stage 2 is the same circuit conjugated by Hadamards on the channel
//!   qubits, which swaps the roles of X and Z; its bit a2 reports the Z⊗Z
//!   eigenvalue the same way.
//!
//! On a Bell-state input both measurements are deterministic and the channel
//! state survives unchanged, so the pair can be identified and reused. On an
//! arbitrary input the protocol acts as a projective measurement in the Bell
//! basis: outcome probabilities are the squared Bell overlaps and the
//! post-state is the matching Bell state.

use crate::bell::{apply_local_op, bell_state, transform_label, BellLabel, LocalOp};
use crate::gates::StandardGate;
use crate::statevec::{StateError, StateVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The two ancilla rounds, in protocol order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StageId {
    /// Reads the X⊗X eigenvalue into a1.
    Stage1,
    /// Reads the Z⊗Z eigenvalue into a2.
    Stage2,
}

/// The two stabilizers whose eigenvalues the stages extract.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stabilizer {
    XX,
    ZZ,
}

/// Outcome of a full two-stage discrimination.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminationResult {
    pub a1: u8,
    pub a2: u8,
    /// Always `label_from_bits(a1, a2)`.
    pub label: BellLabel,
    /// Product of the two stage probabilities.
    pub outcome_prob: f64,
    /// The 2-qubit channel state after both ancillas are measured out.
    pub post_state: StateVector,
}

/// Entangles one fresh ancilla with the channel per the stage's gate
/// sequence, leaving a 3-qubit state whose qubit 2 is ready to measure.
fn prepare_stage(channel: &StateVector, stage: StageId) -> Result<StateVector, StateError> {
    if channel.num_qubits() != 2 {
        return Err(StateError::NotTwoQubits {
            got: channel.num_qubits(),
        });
    }
    let h = StandardGate::H.gate();
    let x = StandardGate::X.gate();
    let work = channel.tensor(&StateVector::basis_state(1, &[0])?)?;
    match stage {
        StageId::Stage1 => work
            .apply_single(&h, 2)?
            .apply_controlled(&x, 2, 0)?
            .apply_controlled(&x, 2, 1)?
            .apply_single(&h, 2),
        StageId::Stage2 => work
            .apply_single(&h, 0)?
            .apply_single(&h, 1)?
            .apply_single(&h, 2)?
            .apply_controlled(&x, 2, 0)?
            .apply_controlled(&x, 2, 1)?
            .apply_single(&h, 0)?
            .apply_single(&h, 1)?
            .apply_single(&h, 2),
    }
}

/// Runs one stage on the channel. The ancilla is measured through `rng`, or
/// projected when `forced_bit` is given; either way it is discarded and the
/// renormalized 2-qubit channel comes back with the bit and its probability.
///
/// Forcing an outcome whose probability is below 1e-14 fails with
/// [`StateError::ImpossibleOutcome`].
pub fn run_stage(
    channel: &StateVector,
    stage: StageId,
    forced_bit: Option<u8>,
    rng: &mut impl Rng,
) -> Result<(u8, f64, StateVector), StateError> {
    let prepared = prepare_stage(channel, stage)?;
    let (bit, prob, collapsed) = match forced_bit {
        Some(b) => {
            let (prob, collapsed) = prepared.project_qubit(2, b)?;
            (b, prob, collapsed)
        }
        None => {
            let (p0, p1) = prepared.outcome_probs(2)?;
            let (bit, collapsed) = prepared.measure_qubit(2, rng)?;
            (bit, if bit == 0 { p0 } else { p1 }, collapsed)
        }
    };
    let (_, post_channel) = collapsed.discard_qubit(2)?;
    Ok((bit, prob, post_channel))
}

/// Runs Stage 1 then Stage 2 and classifies the bit pair.
pub fn discriminate(
    channel: &StateVector,
    rng: &mut impl Rng,
) -> Result<DiscriminationResult, StateError> {
    let (a1, p1, mid) = run_stage(channel, StageId::Stage1, None, rng)?;
    let (a2, p2, post_state) = run_stage(&mid, StageId::Stage2, None, rng)?;
    Ok(DiscriminationResult {
        a1,
        a2,
        label: label_from_bits(a1, a2),
        outcome_prob: p1 * p2,
        post_state,
    })
}

/// The ancilla-bit classification table. a1 picks the X⊗X sign (0 for +),
/// a2 the Z⊗Z sign, and the sign pair pins down the Bell state:
///
/// ```text
/// a1 a2   state
///  0  0   psi+
///  1  0   psi-
///  0  1   phi+
///  1  1   phi-
/// ```
///
/// Bits are read as zero or nonzero.
pub fn label_from_bits(a1: u8, a2: u8) -> BellLabel {
    match (a1 == 0, a2 == 0) {
        (true, true) => BellLabel::PsiPlus,
        (false, true) => BellLabel::PsiMinus,
        (true, false) => BellLabel::PhiPlus,
        (false, false) => BellLabel::PhiMinus,
    }
}

/// Inverse of [`label_from_bits`]: the (a1, a2) pair a Bell state produces.
pub fn bits_for_label(label: BellLabel) -> (u8, u8) {
    match label {
        BellLabel::PsiPlus => (0, 0),
        BellLabel::PsiMinus => (1, 0),
        BellLabel::PhiPlus => (0, 1),
        BellLabel::PhiMinus => (1, 1),
    }
}

/// Squared Bell overlaps `|<bell(L)|channel>|²`, indexed by
/// [`BellLabel::index`]. This is the analytic outcome distribution the
/// protocol realizes; the four values sum to 1.
pub fn predicted_distribution(channel: &StateVector) -> Result<[f64; 4], StateError> {
    let mut dist = [0.0; 4];
    for label in BellLabel::ALL {
        dist[label.index()] = channel.fidelity_up_to_phase(&bell_state(label))?;
    }
    Ok(dist)
}

/// `<channel|σ⊗σ|channel>` for σ = X or Z. Real within 1e-12 because the
/// operator is Hermitian; the tiny imaginary residue is dropped.
pub fn stabilizer_expectation(channel: &StateVector, which: Stabilizer) -> Result<f64, StateError> {
    if channel.num_qubits() != 2 {
        return Err(StateError::NotTwoQubits {
            got: channel.num_qubits(),
        });
    }
    let g = match which {
        Stabilizer::XX => StandardGate::X.gate(),
        Stabilizer::ZZ => StandardGate::Z.gate(),
    };
    let rotated = channel.apply_single(&g, 0)?.apply_single(&g, 1)?;
    Ok(channel.inner_product(&rotated)?.re)
}

/// Dense-coding round trip: encode two classical bits by applying `op` to
/// one shared Bell pair, then decode them by discriminating. Returns the
/// label the transform table predicts together with the measured result;
/// on exact Bell inputs the two always agree with probability 1.
pub fn dense_code_demo(
    start: BellLabel,
    op: LocalOp,
    rng: &mut impl Rng,
) -> Result<(BellLabel, DiscriminationResult), StateError> {
    let encoded = apply_local_op(op, &bell_state(start))?;
    let expected = transform_label(op, start);
    let measured = discriminate(&encoded, rng)?;
    Ok((expected, measured))
}

/// Joint probability and post-state for forcing the outcome pair
/// `(a1, a2)`, or `None` when either stage finds the branch impossible
/// (probability below 1e-14; exactly-zero overlaps land here).
pub fn forced_joint(
    channel: &StateVector,
    a1: u8,
    a2: u8,
) -> Result<Option<(f64, StateVector)>, StateError> {
    // rng is never drawn from on the forced path
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let (_, p1, mid) = match run_stage(channel, StageId::Stage1, Some(a1), &mut rng) {
        Ok(out) => out,
        Err(StateError::ImpossibleOutcome { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let (_, p2, post) = match run_stage(&mid, StageId::Stage2, Some(a2), &mut rng) {
        Ok(out) => out,
        Err(StateError::ImpossibleOutcome { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    Ok(Some((p1 * p2, post)))
}

/// Worst-case deviations found by [`random_state_audit`]. All the maxima
/// stay below 1e-10 and the fidelity floor above 1 − 1e-9 when the
/// implementation is healthy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditReport {
    pub trials: u64,
    /// max |forced joint probability − squared Bell overlap| over all
    /// trials and bit pairs.
    pub max_joint_deviation: f64,
    /// min fidelity between a conditional post-state and its Bell state.
    pub min_conditional_fidelity: f64,
    /// max |P(a1=1) − (1−⟨XX⟩)/2|.
    pub max_xx_identity_deviation: f64,
    /// max |P(a2=1) − (1−⟨ZZ⟩)/2|.
    pub max_zz_identity_deviation: f64,
}

/// Checks the projective-measurement equivalence and the stabilizer
/// identities on `trials` random states. Trial i draws its state from an
/// independent substream of `seed`, so reports are reproducible and trials
/// could run in any order.
pub fn random_state_audit(trials: u64, seed: u64) -> Result<AuditReport, StateError> {
    let mut report = AuditReport {
        trials,
        max_joint_deviation: 0.0,
        min_conditional_fidelity: 1.0,
        max_xx_identity_deviation: 0.0,
        max_zz_identity_deviation: 0.0,
    };
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let channel = StateVector::random(2, &mut rng)?;
        let predicted = predicted_distribution(&channel)?;

        for a1 in 0..2u8 {
            for a2 in 0..2u8 {
                let label = label_from_bits(a1, a2);
                match forced_joint(&channel, a1, a2)? {
                    Some((joint, post)) => {
                        let dev = (joint - predicted[label.index()]).abs();
                        report.max_joint_deviation = report.max_joint_deviation.max(dev);
                        let fid = post.fidelity_up_to_phase(&bell_state(label))?;
                        report.min_conditional_fidelity = report.min_conditional_fidelity.min(fid);
                    }
                    None => {
                        // impossible branch: the analytic probability must
                        // vanish too
                        report.max_joint_deviation =
                            report.max_joint_deviation.max(predicted[label.index()]);
                    }
                }
            }
        }

        let p_a1 = stage_one_probability(&channel, StageId::Stage1)?;
        let xx = stabilizer_expectation(&channel, Stabilizer::XX)?;
        report.max_xx_identity_deviation = report
            .max_xx_identity_deviation
            .max((p_a1 - (1.0 - xx) / 2.0).abs());

        let p_a2 = stage_one_probability(&channel, StageId::Stage2)?;
        let zz = stabilizer_expectation(&channel, Stabilizer::ZZ)?;
        report.max_zz_identity_deviation = report
            .max_zz_identity_deviation
            .max((p_a2 - (1.0 - zz) / 2.0).abs());
    }
    Ok(report)
}

/// P(bit = 1) when the stage runs directly on `channel`.
fn stage_one_probability(channel: &StateVector, stage: StageId) -> Result<f64, StateError> {
    let prepared = prepare_stage(channel, stage)?;
    let (_, p1) = prepared.outcome_probs(2)?;
    Ok(p1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::CLASSIFY_TOL;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(42)
    }

    /// (|00> + |01>)/√2: equal superposition of all four Bell states.
    fn balanced_state() -> StateVector {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let z = Complex64::new(0.0, 0.0);
        StateVector::from_amplitudes(vec![h, h, z, z]).unwrap()
    }

    #[test]
    fn stage_one_reads_xx_sign() {
        let mut r = rng();
        let (bit, prob, post) = run_stage(
            &bell_state(BellLabel::PsiMinus),
            StageId::Stage1,
            None,
            &mut r,
        )
        .unwrap();
        assert_eq!(bit, 1);
        assert!((prob - 1.0).abs() <= 1e-12);
        let fid = post
            .fidelity_up_to_phase(&bell_state(BellLabel::PsiMinus))
            .unwrap();
        assert!(fid >= 1.0 - 1e-12);
    }

    #[test]
    fn stage_two_reads_zz_sign() {
        let mut r = rng();
        let (bit, prob, post) = run_stage(
            &bell_state(BellLabel::PhiPlus),
            StageId::Stage2,
            None,
            &mut r,
        )
        .unwrap();
        assert_eq!(bit, 1);
        assert!((prob - 1.0).abs() <= 1e-12);
        let fid = post
            .fidelity_up_to_phase(&bell_state(BellLabel::PhiPlus))
            .unwrap();
        assert!(fid >= 1.0 - 1e-12);
    }

    #[test]
    fn stage_one_balanced_probability() {
        let mut r = rng();
        let (_, prob, _) = run_stage(&balanced_state(), StageId::Stage1, Some(0), &mut r).unwrap();
        assert!((prob - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn forcing_impossible_outcome_fails() {
        let mut r = rng();
        let err = run_stage(
            &bell_state(BellLabel::PsiPlus),
            StageId::Stage1,
            Some(1),
            &mut r,
        )
        .unwrap_err();
        assert!(matches!(err, StateError::ImpossibleOutcome { .. }));
    }

    #[test]
    fn table_rows_reproduced() {
        let expected_bits = [
            (BellLabel::PsiPlus, 0, 0),
            (BellLabel::PsiMinus, 1, 0),
            (BellLabel::PhiPlus, 0, 1),
            (BellLabel::PhiMinus, 1, 1),
        ];
        for (label, a1, a2) in expected_bits {
            let mut r = rng();
            let out = discriminate(&bell_state(label), &mut r).unwrap();
            assert_eq!((out.a1, out.a2), (a1, a2), "{label}");
            assert_eq!(out.label, label);
            assert!((out.outcome_prob - 1.0).abs() <= 1e-12);
            let fid = out
                .post_state
                .fidelity_up_to_phase(&bell_state(label))
                .unwrap();
            assert!(fid >= 1.0 - 1e-12, "{label} damaged: {fid}");
        }
    }

    #[test]
    fn balanced_state_outcomes_quarter_each() {
        for a1 in 0..2u8 {
            for a2 in 0..2u8 {
                let (joint, post) = forced_joint(&balanced_state(), a1, a2).unwrap().unwrap();
                assert!((joint - 0.25).abs() <= 1e-12, "({a1},{a2}): {joint}");
                let label = label_from_bits(a1, a2);
                let fid = post.fidelity_up_to_phase(&bell_state(label)).unwrap();
                assert!(fid >= 1.0 - 1e-12);
            }
        }
    }

    #[test]
    fn bits_map_to_table_labels() {
        assert_eq!(label_from_bits(0, 0), BellLabel::PsiPlus);
        assert_eq!(label_from_bits(1, 0), BellLabel::PsiMinus);
        assert_eq!(label_from_bits(0, 1), BellLabel::PhiPlus);
        assert_eq!(label_from_bits(1, 1), BellLabel::PhiMinus);
    }

    #[test]
    fn bits_round_trip_with_labels() {
        for label in BellLabel::ALL {
            let (a1, a2) = bits_for_label(label);
            assert_eq!(label_from_bits(a1, a2), label);
        }
    }

    #[test]
    fn bit_map_is_a_bijection() {
        let mut seen = [false; 4];
        for a1 in 0..2u8 {
            for a2 in 0..2u8 {
                seen[label_from_bits(a1, a2).index()] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn predicted_distribution_examples() {
        let dist = predicted_distribution(&bell_state(BellLabel::PsiMinus)).unwrap();
        assert!((dist[BellLabel::PsiMinus.index()] - 1.0).abs() <= 1e-12);
        assert!(dist[BellLabel::PsiPlus.index()] <= 1e-12);

        let dist = predicted_distribution(&balanced_state()).unwrap();
        for p in dist {
            assert!((p - 0.25).abs() <= 1e-12);
        }

        let zz = StateVector::basis_state(2, &[0, 0]).unwrap();
        let dist = predicted_distribution(&zz).unwrap();
        assert!((dist[BellLabel::PsiPlus.index()] - 0.5).abs() <= 1e-12);
        assert!((dist[BellLabel::PsiMinus.index()] - 0.5).abs() <= 1e-12);
        assert!(dist[BellLabel::PhiPlus.index()] <= 1e-12);
        assert!(dist[BellLabel::PhiMinus.index()] <= 1e-12);
    }

    #[test]
    fn predicted_distribution_sums_to_one() {
        let mut r = rng();
        for _ in 0..20 {
            let s = StateVector::random(2, &mut r).unwrap();
            let total: f64 = predicted_distribution(&s).unwrap().iter().sum();
            assert!((total - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn stabilizer_expectation_examples() {
        let xx = |s: &StateVector| stabilizer_expectation(s, Stabilizer::XX).unwrap();
        let zz = |s: &StateVector| stabilizer_expectation(s, Stabilizer::ZZ).unwrap();

        assert!((xx(&bell_state(BellLabel::PsiPlus)) - 1.0).abs() <= 1e-12);
        assert!((xx(&bell_state(BellLabel::PhiMinus)) + 1.0).abs() <= 1e-12);
        let zero_zero = StateVector::basis_state(2, &[0, 0]).unwrap();
        assert!(xx(&zero_zero).abs() <= 1e-12);
        assert!((zz(&zero_zero) - 1.0).abs() <= 1e-12);
        assert!((zz(&bell_state(BellLabel::PhiPlus)) + 1.0).abs() <= 1e-12);
    }

    #[test]
    fn dense_code_demo_examples() {
        let mut r = rng();
        let (expected, measured) =
            dense_code_demo(BellLabel::PsiPlus, LocalOp::X1, &mut r).unwrap();
        assert_eq!(expected, BellLabel::PhiPlus);
        assert_eq!(measured.label, BellLabel::PhiPlus);
        assert_eq!((measured.a1, measured.a2), (0, 1));
        assert!((measured.outcome_prob - 1.0).abs() <= 1e-12);

        let (expected, measured) =
            dense_code_demo(BellLabel::PsiPlus, LocalOp::Z1, &mut r).unwrap();
        assert_eq!(expected, BellLabel::PsiMinus);
        assert_eq!((measured.a1, measured.a2), (1, 0));
    }

    #[test]
    fn double_flip_returns_home() {
        let mut r = rng();
        let flipped = apply_local_op(LocalOp::X1, &bell_state(BellLabel::PhiMinus)).unwrap();
        let back = apply_local_op(LocalOp::X1, &flipped).unwrap();
        let out = discriminate(&back, &mut r).unwrap();
        assert_eq!(out.label, BellLabel::PhiMinus);
        assert_eq!((out.a1, out.a2), (1, 1));
    }

    #[test]
    fn repeat_discrimination_is_stable() {
        let mut r = rng();
        let first = discriminate(&bell_state(BellLabel::PhiMinus), &mut r).unwrap();
        let second = discriminate(&first.post_state, &mut r).unwrap();
        assert_eq!((second.a1, second.a2), (first.a1, first.a2));
        assert!((second.outcome_prob - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn stage_order_is_immaterial_on_bell_inputs() {
        for label in BellLabel::ALL {
            let mut r = rng();
            let (a2_first, _, mid) =
                run_stage(&bell_state(label), StageId::Stage2, None, &mut r).unwrap();
            let (a1_second, _, post) = run_stage(&mid, StageId::Stage1, None, &mut r).unwrap();
            let mut r = rng();
            let normal = discriminate(&bell_state(label), &mut r).unwrap();
            assert_eq!((a1_second, a2_first), (normal.a1, normal.a2), "{label}");
            let fid = post.fidelity_up_to_phase(&normal.post_state).unwrap();
            assert!(fid >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn sampled_outcomes_respect_bell_classification() {
        // arbitrary state: every sampled outcome must collapse onto the
        // labeled Bell state
        let mut r = rng();
        for _ in 0..10 {
            let s = StateVector::random(2, &mut r).unwrap();
            let out = discriminate(&s, &mut r).unwrap();
            let got = crate::bell::classify_bell(&out.post_state, CLASSIFY_TOL).unwrap();
            assert_eq!(got, Some(out.label));
        }
    }

    #[test]
    fn audit_small_run_is_clean() {
        let report = random_state_audit(25, 7).unwrap();
        assert_eq!(report.trials, 25);
        assert!(report.max_joint_deviation < 1e-10, "{report:?}");
        assert!(report.min_conditional_fidelity > 1.0 - 1e-9, "{report:?}");
        assert!(report.max_xx_identity_deviation < 1e-10, "{report:?}");
        assert!(report.max_zz_identity_deviation < 1e-10, "{report:?}");
    }

    #[test]
    fn audit_is_reproducible() {
        let a = random_state_audit(10, 3).unwrap();
        let b = random_state_audit(10, 3).unwrap();
        assert_eq!(a, b);
    }
}
