//! Simulation and verification toolkit for three entangled particles spread
//! over two-chambered boxes.
//!
//! The library builds the three-box entangled state, expands it into the
//! position, bonding and phase frames, performs projective measurements with
//! collapse, derives the two deterministic pair rules ("same-R, different-L"
//! for positions; "same-L, different-R" for bondings), applies the
//! certainty-implies-property inference mechanically, and shows by exhaustive
//! enumeration that no per-box hidden assignment of position and bonding
//! values reproduces all of the forced correlations. A companion module
//! computes the physical waveforms (square-well eigenfunctions and separated
//! hydrogen-molecular-ion orbitals) that realize the two-chambered box.
//!
//! Start with the runnable examples:
//!
//! ```bash
//! cargo run -p ghz-boxes --example expansions
//! cargo run -p ghz-boxes --example pair_rules
//! cargo run -p ghz-boxes --example epr_contradiction
//! cargo run -p ghz-boxes --example lhv_scan
//! cargo run -p ghz-boxes --example collapse_and_sampling
//! cargo run -p ghz-boxes --example waveforms
//! ```
//!
//! The same functionality is scriptable through the `ghz-boxes` binary with
//! the subcommands `expand`, `rules`, `epr`, `lhv`, `measure` and
//! `waveform`; see the README.

pub mod boxbasis;
pub mod doublewell;
pub mod entangler;
pub mod epr;
mod error;
pub mod measurement;
pub mod qstate;
pub mod report;

pub use boxbasis::{Basis, Label, PhaseFactor, SpinAxis};
pub use error::{Error, Result};
pub use qstate::{BoxId, BoxState, AMPLITUDE_TOLERANCE};
