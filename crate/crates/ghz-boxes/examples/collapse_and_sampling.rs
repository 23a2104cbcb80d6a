//! Collapse narratives: the two-box correlated state, remote certainty on
//! the three-box state, and reproducible seeded sampling.
//!
//! ```bash
//! cargo run -p ghz-boxes --example collapse_and_sampling
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ghz_boxes::boxbasis::{beta_state, PhaseFactor};
use ghz_boxes::entangler::{ghz_state, two_box_correlated};
use ghz_boxes::measurement::{
    measure_collapse, outcome_probabilities, predict_remaining, sample_measure,
    sample_measure_with, MeasurementRecord, Prediction,
};
use ghz_boxes::{Basis, BoxId, Label};

fn main() {
    // Two correlated boxes: opening one tells you about the other.
    let pair = two_box_correlated();
    let before = outcome_probabilities(&pair, BoxId::B, Basis::Position).unwrap();
    println!("two-box state, box B before any measurement: {before:?}");
    let collapsed = measure_collapse(&pair, BoxId::A, Basis::Position, Label::L).unwrap();
    let after = outcome_probabilities(&collapsed, BoxId::B, Basis::Position).unwrap();
    println!("after finding box A in chamber L:            {after:?}");
    assert!(after[&Label::L] > 0.999_999_999);

    // Three boxes: two position outcomes force the third.
    let ghz = ghz_state();
    let records = [
        MeasurementRecord::new(BoxId::A, Basis::Position, Label::L),
        MeasurementRecord::new(BoxId::B, Basis::Position, Label::L),
    ];
    match predict_remaining(&ghz, &records, BoxId::C, Basis::Position).unwrap() {
        Prediction::Certain(label) => {
            println!("\nA=L and B=L make the position of C certain: {label}");
            assert_eq!(label, Label::R);
        }
        Prediction::Probabilistic(map) => panic!("expected certainty, got {map:?}"),
    }

    // One outcome alone fixes nothing.
    let one = [MeasurementRecord::new(BoxId::A, Basis::Position, Label::L)];
    match predict_remaining(&ghz, &one, BoxId::C, Basis::Position).unwrap() {
        Prediction::Probabilistic(map) => println!("A=L alone leaves C undetermined: {map:?}"),
        Prediction::Certain(label) => panic!("one record cannot force {label}"),
    }

    // Seeded sampling: same seed, same transcript.
    let state = beta_state(PhaseFactor::I);
    let (first, _) = sample_measure(&state, BoxId::A, Basis::Position, 7).unwrap();
    let (second, _) = sample_measure(&state, BoxId::A, Basis::Position, 7).unwrap();
    println!("\nseed 7 samples the position twice: {first}, {second}");
    assert_eq!(first, second);

    // Long-run frequencies track the squared amplitudes.
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let samples = 20_000;
    let mut left = 0;
    for _ in 0..samples {
        let (outcome, _) =
            sample_measure_with(&state, BoxId::A, Basis::Position, &mut rng).unwrap();
        if outcome == Label::L {
            left += 1;
        }
    }
    let frequency = left as f64 / samples as f64;
    println!("frequency of L over {samples} seeded samples: {frequency:.4}");
    assert!((frequency - 0.5).abs() < 0.02);
}
