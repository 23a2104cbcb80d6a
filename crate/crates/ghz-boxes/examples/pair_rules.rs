//! Derive the two deterministic pair rules from the entangled state and
//! show the phase-basis diagnostic that only yields a partial table.
//!
//! ```bash
//! cargo run -p ghz-boxes --example pair_rules
//! ```

use ghz_boxes::entangler::ghz_state;
use ghz_boxes::epr::{derive_mixed_rule, derive_pair_rule, derive_pair_rule_partial, PairRule};
use ghz_boxes::Basis;

fn print_rule(rule: &PairRule) {
    println!(
        "measuring two boxes in the {} basis fixes the third box's {}:",
        rule.measured_basis, rule.target_basis
    );
    for row in &rule.rows {
        let forced = row
            .prediction
            .map(|l| l.to_string())
            .unwrap_or_else(|| "(unreachable)".to_string());
        println!(
            "  ({:>2}, {:>2})  ->  {:<3} joint probability {:.2}",
            row.pair_outcome.0.to_string(),
            row.pair_outcome.1.to_string(),
            forced,
            row.joint_probability
        );
    }
    match rule.same_different_table() {
        Ok(table) => println!(
            "  reduced: same -> {}, different -> {}\n",
            table.same, table.different
        ),
        Err(e) => println!("  no same/different reduction: {e}\n"),
    }
}

fn main() {
    let ghz = ghz_state();

    let position = derive_pair_rule(&ghz, Basis::Position, Basis::Position).unwrap();
    print_rule(&position);

    let bonding = derive_pair_rule(&ghz, Basis::Bonding, Basis::Position).unwrap();
    print_rule(&bonding);

    let table = position.same_different_table().unwrap();
    assert_eq!(table.same.to_string(), "R");
    let table = bonding.same_different_table().unwrap();
    assert_eq!(table.same.to_string(), "L");
    println!("note the reversal of L and R between the two rules; that is the whole story.\n");

    // Bonding on one box plus position on another pins the remaining
    // bonding, which is what licenses treating bonding as a possessed
    // property too.
    let mixed = derive_mixed_rule(&ghz).unwrap();
    println!("mixed rule (bonding of one box, position of another -> bonding of the third):");
    for row in &mixed.rows {
        println!(
            "  ({:>2}, {})  ->  {}",
            row.bonding_outcome.to_string(),
            row.position_outcome,
            row.prediction
        );
    }
    println!();

    // Phase measurements on a pair only ever agree, so the two "different"
    // rows never occur and no same/different rule exists.
    let phase = derive_pair_rule_partial(&ghz, Basis::Phase, Basis::Phase).unwrap();
    print_rule(&phase);
    assert!(derive_pair_rule(&ghz, Basis::Phase, Basis::Phase).is_err());
}
