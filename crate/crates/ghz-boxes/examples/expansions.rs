//! Build the three-box entangled state and multiply it out into the three
//! frame choices used by the argument.
//!
//! ```bash
//! cargo run -p ghz-boxes --example expansions
//! ```

use ghz_boxes::entangler::{expand_in, ghz_expansion, ghz_state};
use ghz_boxes::{Basis, AMPLITUDE_TOLERANCE};

fn print_expansion(title: &str, frames: [Basis; 3]) {
    let expansion = ghz_expansion(&frames, AMPLITUDE_TOLERANCE);
    println!("{title}");
    println!(
        "  {} raw products combine into {} surviving terms ({} labels cancel):",
        expansion.raw_products,
        expansion.terms.len(),
        expansion.cancelled_labels
    );
    for term in &expansion.terms {
        let labels: Vec<String> = term.labels.iter().map(|l| l.to_string()).collect();
        println!(
            "    {:<12}  {:+.4}{:+.4}i",
            labels.join(" "),
            term.coefficient.re,
            term.coefficient.im
        );
    }
    println!();
}

fn main() {
    let ghz = ghz_state();
    println!("three-box entangled state, position-frame amplitudes:");
    for (index, amplitude) in ghz.amplitudes().iter().enumerate() {
        let labels: Vec<String> = ghz.labels_of(index).iter().map(|l| l.to_string()).collect();
        println!(
            "  |{}>  {:+.4}{:+.4}i",
            labels.join(""),
            amplitude.re,
            amplitude.im
        );
    }
    println!();

    print_expansion(
        "expanded in (position, position, position):",
        [Basis::Position; 3],
    );
    print_expansion(
        "expanded in (bonding, bonding, position):",
        [Basis::Bonding, Basis::Bonding, Basis::Position],
    );
    print_expansion("expanded in (phase, phase, phase):", [Basis::Phase; 3]);

    // The generic expansion of the stored state agrees with multiplying out
    // the defining form.
    let generic = expand_in(&ghz, &[Basis::Position; 3]).unwrap();
    assert_eq!(generic.terms.len(), 4);
    println!("the four surviving position labels all have an odd number of R entries.");
}
