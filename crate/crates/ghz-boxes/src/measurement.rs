//! Projective measurement of one box in a chosen basis, with collapse.
//!
//! Measurement is projection in the stored position frame via the
//! change-of-basis tables: the chosen box is rotated into the measurement
//! basis, one component is kept and renormalized, and the slot is rotated
//! back. The two-outcome observable never needs spectral machinery.
//!
//! Sampling draws from a caller-seeded ChaCha8 generator, so transcripts are
//! reproducible and concurrent callers never share generator state.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::boxbasis::{Basis, Label};
use crate::error::{Error, Result};
use crate::qstate::{BoxId, BoxState, AMPLITUDE_TOLERANCE};

/// Threshold above which a predicted probability counts as certainty.
///
/// Looser than the amplitude tolerance so that rounding accumulated over two
/// collapses cannot flip a verdict; the entangled-state certainties are exact
/// and land at 1 to machine precision.
pub const CERTAINTY_THRESHOLD: f64 = 1.0 - 1e-9;

/// One performed (or counterfactually considered) measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MeasurementRecord {
    #[serde(rename = "box")]
    pub box_id: BoxId,
    pub basis: Basis,
    pub outcome: Label,
}

impl MeasurementRecord {
    pub fn new(box_id: BoxId, basis: Basis, outcome: Label) -> Self {
        MeasurementRecord {
            box_id,
            basis,
            outcome,
        }
    }
}

/// What a measurement on a remote box would yield.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Prediction {
    /// One outcome has probability at least [`CERTAINTY_THRESHOLD`].
    Certain(Label),
    Probabilistic(BTreeMap<Label, f64>),
}

impl Prediction {
    pub fn certain_label(&self) -> Option<Label> {
        match self {
            Prediction::Certain(label) => Some(*label),
            Prediction::Probabilistic(_) => None,
        }
    }
}

fn check_box(state: &BoxState, box_id: BoxId) -> Result<usize> {
    let index = box_id.index();
    if index >= state.n_boxes() {
        return Err(Error::BoxOutOfRange {
            id: box_id,
            n_boxes: state.n_boxes(),
        });
    }
    Ok(index)
}

fn check_outcome(basis: Basis, outcome: Label) -> Result<()> {
    if outcome.basis() != basis {
        return Err(Error::LabelNotInBasis {
            label: outcome,
            basis,
        });
    }
    Ok(())
}

/// Rotates `box_id` into `basis` coordinates (everything else into position)
/// and returns the rotated state plus the probability of each outcome.
fn rotated_with_probabilities(
    state: &BoxState,
    box_id: BoxId,
    basis: Basis,
) -> Result<(BoxState, [f64; 2])> {
    let k = check_box(state, box_id)?;
    let rotated = state
        .to_position_frame()
        .transform_box(k, &basis.position_to_basis(), basis);
    let n = rotated.n_boxes();
    let mask = 1usize << (n - 1 - k);
    let mut probabilities = [0.0f64; 2];
    for (index, amplitude) in rotated.amplitudes().iter().enumerate() {
        let bit = usize::from(index & mask != 0);
        probabilities[bit] += amplitude.norm_sqr();
    }
    Ok((rotated, probabilities))
}

/// Probability of each outcome of measuring `box_id` in `basis`: the squared
/// moduli of the projected components.
pub fn outcome_probabilities(
    state: &BoxState,
    box_id: BoxId,
    basis: Basis,
) -> Result<BTreeMap<Label, f64>> {
    let (_, probabilities) = rotated_with_probabilities(state, box_id, basis)?;
    let labels = basis.labels();
    Ok(BTreeMap::from([
        (labels[0], probabilities[0]),
        (labels[1], probabilities[1]),
    ]))
}

/// Projects onto `outcome` and renormalizes; the remaining boxes' marginals
/// update through the entanglement. The result is stored in the position
/// frame.
pub fn measure_collapse(
    state: &BoxState,
    box_id: BoxId,
    basis: Basis,
    outcome: Label,
) -> Result<BoxState> {
    check_outcome(basis, outcome)?;
    let (rotated, probabilities) = rotated_with_probabilities(state, box_id, basis)?;
    let keep = outcome.index();
    let probability = probabilities[keep];
    if probability <= AMPLITUDE_TOLERANCE {
        return Err(Error::ImpossibleOutcome(format!(
            "outcome {outcome} on box {box_id} in the {basis} basis has probability {probability:.3e}"
        )));
    }
    let k = box_id.index();
    let n = rotated.n_boxes();
    let mask = 1usize << (n - 1 - k);
    let scale = 1.0 / probability.sqrt();
    let amplitudes = rotated
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(index, &a)| {
            if usize::from(index & mask != 0) == keep {
                a * scale
            } else {
                num_complex::Complex64::ZERO
            }
        })
        .collect();
    let projected = BoxState::new(rotated.frames().to_vec(), amplitudes)?;
    Ok(projected
        .transform_box(k, &basis.basis_to_position(), Basis::Position)
        .to_position_frame())
}

/// Draws one outcome with a caller-supplied generator and returns it with
/// the collapsed state.
pub fn sample_measure_with<R: Rng>(
    state: &BoxState,
    box_id: BoxId,
    basis: Basis,
    rng: &mut R,
) -> Result<(Label, BoxState)> {
    let (_, probabilities) = rotated_with_probabilities(state, box_id, basis)?;
    let u: f64 = rng.random();
    let labels = basis.labels();
    let outcome = if u < probabilities[0] {
        labels[0]
    } else {
        labels[1]
    };
    let collapsed = measure_collapse(state, box_id, basis, outcome)?;
    Ok((outcome, collapsed))
}

/// Seeded front end over [`sample_measure_with`]: a fresh ChaCha8 generator
/// is built from `seed`, so equal inputs give equal transcripts.
pub fn sample_measure(
    state: &BoxState,
    box_id: BoxId,
    basis: Basis,
    seed: u64,
) -> Result<(Label, BoxState)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_measure_with(state, box_id, basis, &mut rng)
}

/// Applies the recorded measurements by sequential collapse, then reports
/// what measuring `target_box` in `target_basis` would yield.
pub fn predict_remaining(
    state: &BoxState,
    records: &[MeasurementRecord],
    target_box: BoxId,
    target_basis: Basis,
) -> Result<Prediction> {
    if records.iter().any(|r| r.box_id == target_box) {
        return Err(Error::TargetMeasured(target_box));
    }
    let mut current = state.clone();
    for record in records {
        current = measure_collapse(&current, record.box_id, record.basis, record.outcome)?;
    }
    let probabilities = outcome_probabilities(&current, target_box, target_basis)?;
    let (&best_label, &best_probability) = probabilities
        .iter()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("two outcomes");
    if best_probability >= CERTAINTY_THRESHOLD {
        Ok(Prediction::Certain(best_label))
    } else {
        Ok(Prediction::Probabilistic(probabilities))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxbasis::{beta_state, PhaseFactor};
    use crate::entangler::{ghz_state, single_box, two_box_correlated};
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_box_position_probabilities_are_even() {
        let state = beta_state(PhaseFactor::I);
        let probs = outcome_probabilities(&state, BoxId::A, Basis::Position).unwrap();
        assert_abs_diff_eq!(probs[&Label::L], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(probs[&Label::R], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn ghz_box_marginal_is_even() {
        let probs = outcome_probabilities(&ghz_state(), BoxId::A, Basis::Position).unwrap();
        assert_abs_diff_eq!(probs[&Label::L], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn eigenstate_probabilities_are_sharp() {
        let bond = single_box(Basis::Bonding, 0);
        let probs = outcome_probabilities(&bond, BoxId::A, Basis::Bonding).unwrap();
        assert_abs_diff_eq!(probs[&Label::Plus], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(probs[&Label::Minus], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn probabilities_sum_to_one_everywhere() {
        let ghz = ghz_state();
        for box_id in BoxId::ALL {
            for basis in Basis::ALL {
                let probs = outcome_probabilities(&ghz, box_id, basis).unwrap();
                let total: f64 = probs.values().sum();
                assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn box_out_of_range() {
        let pair = two_box_correlated();
        assert!(matches!(
            outcome_probabilities(&pair, BoxId::C, Basis::Position),
            Err(Error::BoxOutOfRange { .. })
        ));
    }

    #[test]
    fn outcome_must_belong_to_basis() {
        let pair = two_box_correlated();
        assert!(matches!(
            measure_collapse(&pair, BoxId::A, Basis::Position, Label::Plus),
            Err(Error::LabelNotInBasis { .. })
        ));
    }

    #[test]
    fn two_box_collapse_yields_product_state() {
        let pair = two_box_correlated();
        let collapsed = measure_collapse(&pair, BoxId::A, Basis::Position, Label::L).unwrap();
        let ll = BoxState::basis_state(&[Label::L, Label::L]).unwrap();
        assert!(collapsed.approx_eq(&ll, 1e-12));
    }

    #[test]
    fn ghz_two_position_collapses_fix_the_third() {
        let ghz = ghz_state();
        let after_a = measure_collapse(&ghz, BoxId::A, Basis::Position, Label::L).unwrap();
        let after_b = measure_collapse(&after_a, BoxId::B, Basis::Position, Label::L).unwrap();
        let probs = outcome_probabilities(&after_b, BoxId::C, Basis::Position).unwrap();
        assert_abs_diff_eq!(probs[&Label::R], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn impossible_phase_pair_is_rejected() {
        // The entangled state has no (+i, -i, .) component.
        let ghz = ghz_state();
        let after_a = measure_collapse(&ghz, BoxId::A, Basis::Phase, Label::PlusI).unwrap();
        assert!(matches!(
            measure_collapse(&after_a, BoxId::B, Basis::Phase, Label::MinusI),
            Err(Error::ImpossibleOutcome(_))
        ));
    }

    #[test]
    fn collapse_order_is_irrelevant() {
        let ghz = ghz_state();
        let records = [
            MeasurementRecord::new(BoxId::A, Basis::Bonding, Label::Plus),
            MeasurementRecord::new(BoxId::B, Basis::Position, Label::R),
        ];
        let mut forward = ghz.clone();
        for r in &records {
            forward = measure_collapse(&forward, r.box_id, r.basis, r.outcome).unwrap();
        }
        let mut backward = ghz.clone();
        for r in records.iter().rev() {
            backward = measure_collapse(&backward, r.box_id, r.basis, r.outcome).unwrap();
        }
        assert!(forward.approx_eq(&backward, 1e-12));
    }

    #[test]
    fn repeat_measurement_is_stable() {
        let ghz = ghz_state();
        let collapsed = measure_collapse(&ghz, BoxId::B, Basis::Bonding, Label::Minus).unwrap();
        let probs = outcome_probabilities(&collapsed, BoxId::B, Basis::Bonding).unwrap();
        assert_abs_diff_eq!(probs[&Label::Minus], 1.0, epsilon = 1e-12);
        let again = measure_collapse(&collapsed, BoxId::B, Basis::Bonding, Label::Minus).unwrap();
        assert!(again.approx_eq(&collapsed, 1e-12));
    }

    #[test]
    fn no_signalling_marginals() {
        // The marginal of box C is unchanged by whichever basis is measured
        // on box A, averaged over A's outcomes.
        let ghz = ghz_state();
        for a_basis in Basis::ALL {
            for c_basis in Basis::ALL {
                let direct = outcome_probabilities(&ghz, BoxId::C, c_basis).unwrap();
                let a_probs = outcome_probabilities(&ghz, BoxId::A, a_basis).unwrap();
                let mut mixed: BTreeMap<Label, f64> =
                    c_basis.labels().iter().map(|&l| (l, 0.0)).collect();
                for (&a_outcome, &weight) in &a_probs {
                    if weight <= AMPLITUDE_TOLERANCE {
                        continue;
                    }
                    let collapsed = measure_collapse(&ghz, BoxId::A, a_basis, a_outcome).unwrap();
                    let conditional = outcome_probabilities(&collapsed, BoxId::C, c_basis).unwrap();
                    for (label, p) in conditional {
                        *mixed.get_mut(&label).unwrap() += weight * p;
                    }
                }
                for (label, p) in &direct {
                    assert_abs_diff_eq!(*p, mixed[label], epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn predict_bonding_pair_forces_position() {
        let ghz = ghz_state();
        let records = [
            MeasurementRecord::new(BoxId::A, Basis::Bonding, Label::Plus),
            MeasurementRecord::new(BoxId::B, Basis::Bonding, Label::Plus),
        ];
        let prediction = predict_remaining(&ghz, &records, BoxId::C, Basis::Position).unwrap();
        assert_eq!(prediction, Prediction::Certain(Label::L));
    }

    #[test]
    fn predict_mixed_positions_force_left() {
        let ghz = ghz_state();
        let records = [
            MeasurementRecord::new(BoxId::A, Basis::Position, Label::L),
            MeasurementRecord::new(BoxId::B, Basis::Position, Label::R),
        ];
        let prediction = predict_remaining(&ghz, &records, BoxId::C, Basis::Position).unwrap();
        assert_eq!(prediction, Prediction::Certain(Label::L));
    }

    #[test]
    fn predict_bonding_from_bonding_and_position() {
        // Bonding on A plus position on C pins down the bonding of B.
        let ghz = ghz_state();
        let records = [
            MeasurementRecord::new(BoxId::A, Basis::Bonding, Label::Plus),
            MeasurementRecord::new(BoxId::C, Basis::Position, Label::L),
        ];
        let prediction = predict_remaining(&ghz, &records, BoxId::B, Basis::Bonding).unwrap();
        assert_eq!(prediction, Prediction::Certain(Label::Plus));
    }

    #[test]
    fn predict_single_record_is_probabilistic() {
        let ghz = ghz_state();
        let records = [MeasurementRecord::new(BoxId::A, Basis::Position, Label::L)];
        let prediction = predict_remaining(&ghz, &records, BoxId::B, Basis::Position).unwrap();
        match prediction {
            Prediction::Probabilistic(map) => {
                assert_abs_diff_eq!(map[&Label::L], 0.5, epsilon = 1e-12);
            }
            Prediction::Certain(_) => panic!("one position record cannot fix another box"),
        }
    }

    #[test]
    fn predict_rejects_measured_target() {
        let ghz = ghz_state();
        let records = [MeasurementRecord::new(BoxId::A, Basis::Position, Label::L)];
        assert!(matches!(
            predict_remaining(&ghz, &records, BoxId::A, Basis::Position),
            Err(Error::TargetMeasured(BoxId::A))
        ));
    }

    #[test]
    fn predict_rejects_inconsistent_records() {
        let ghz = ghz_state();
        let records = [
            MeasurementRecord::new(BoxId::A, Basis::Phase, Label::PlusI),
            MeasurementRecord::new(BoxId::B, Basis::Phase, Label::MinusI),
        ];
        assert!(matches!(
            predict_remaining(&ghz, &records, BoxId::C, Basis::Position),
            Err(Error::ImpossibleOutcome(_))
        ));
    }

    #[test]
    fn fixed_seed_reproduces_outcome() {
        let state = beta_state(PhaseFactor::ONE);
        let (first, _) = sample_measure(&state, BoxId::A, Basis::Position, 12345).unwrap();
        let (second, _) = sample_measure(&state, BoxId::A, Basis::Position, 12345).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn eigenstate_always_samples_its_label() {
        let anti = single_box(Basis::Bonding, 1);
        for seed in 0..32 {
            let (outcome, collapsed) =
                sample_measure(&anti, BoxId::A, Basis::Bonding, seed).unwrap();
            assert_eq!(outcome, Label::Minus);
            let probs = outcome_probabilities(&collapsed, BoxId::A, Basis::Bonding).unwrap();
            assert_abs_diff_eq!(probs[&Label::Minus], 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn sampled_collapse_matches_deterministic_collapse() {
        let ghz = ghz_state();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (outcome, collapsed) =
            sample_measure_with(&ghz, BoxId::B, Basis::Position, &mut rng).unwrap();
        let reference = measure_collapse(&ghz, BoxId::B, Basis::Position, outcome).unwrap();
        assert!(collapsed.approx_eq(&reference, 1e-12));
    }
}
