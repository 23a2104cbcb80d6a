//! Apply the certainty-implies-property inference to both rule families and
//! exhibit the clash between the two forced sets of position properties.
//!
//! ```bash
//! cargo run -p ghz-boxes --example epr_contradiction
//! ```

use ghz_boxes::entangler::ghz_state;
use ghz_boxes::epr::{
    contradiction_check, derive_pair_rule, parity_certificate, reality_distributions,
};
use ghz_boxes::Basis;

fn main() {
    let ghz = ghz_state();

    let position_rule = derive_pair_rule(&ghz, Basis::Position, Basis::Position).unwrap();
    let from_positions = reality_distributions(&position_rule).unwrap();
    println!("position measurements allow these position-property distributions:");
    for distribution in &from_positions {
        println!("  {distribution}");
    }

    let bonding_rule = derive_pair_rule(&ghz, Basis::Bonding, Basis::Position).unwrap();
    let from_bondings = reality_distributions(&bonding_rule).unwrap();
    println!("bonding measurements allow these position-property distributions:");
    for distribution in &from_bondings {
        println!("  {distribution}");
    }

    let clash = contradiction_check(&from_positions, &from_bondings);
    println!("\nintersection empty: {clash}");
    assert!(clash);

    let certificate = parity_certificate().unwrap();
    println!("\nparity certificate (L=+1, R=-1):");
    for (distribution, product) in certificate
        .position_distributions
        .iter()
        .zip(&certificate.position_products)
    {
        println!("  {distribution}: product {product:+}");
    }
    for (distribution, product) in certificate
        .bonding_distributions
        .iter()
        .zip(&certificate.bonding_products)
    {
        println!("  {distribution}: product {product:+}");
    }
    println!(
        "  position rule forces p_A*p_B*p_C = {:+}; bonding constraints force {:+}",
        certificate.position_rule_parity, certificate.forced_position_product
    );
    for line in &certificate.case_analysis {
        println!("  {line}");
    }
    assert!(certificate.contradiction);
    println!("\nno assignment of position properties satisfies both families.");
}
